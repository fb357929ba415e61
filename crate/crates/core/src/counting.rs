//! Exact enumeration and counting of solutions to
//! `x_1^{a_1} ... x_k^{a_k} = y` with every entry in an interval `[lo, hi]`.
//!
//! Solutions are ordered tuples: `(2, 3)` and `(3, 2)` are different solutions
//! of `xy = z`. A tuple is degenerate when two of the `x_i` coincide.
//!
//! Uncoloured totals use a recursive divisor-sum method whose innermost
//! two-variable layer is the Dirichlet hyperbola identity; non-degenerate
//! totals follow from Möbius inversion over set partitions of the variables.
//! Coloured counts stream over `x_1` and prune on colour mismatches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, iroot};
use crate::colouring::DiscreteColouring;
use crate::equation::{EquationError, EquationSpec};
use crate::exec::Exec;
use crate::solution::{has_repeat, ColourCount, CountReport, MonoSolution};

pub use crate::arith::divisor_count;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("invalid domain [{lo}, {hi}]: need 2 <= lo <= hi")]
    Domain { lo: u64, hi: u64 },
    #[error("colouring covers [{c_lo}, {c_hi}] but the query needs [{lo}, {hi}]")]
    ColouringDomain { lo: u64, hi: u64, c_lo: u64, c_hi: u64 },
    #[error(transparent)]
    Equation(#[from] EquationError),
}

/// What to count: solutions with every `x_i` and `y` in `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct CountQuery<'a> {
    pub eq: EquationSpec,
    pub lo: u64,
    pub hi: u64,
    pub colouring: Option<&'a DiscreteColouring>,
    pub non_degenerate_only: bool,
}

impl<'a> CountQuery<'a> {
    pub fn new(eq: EquationSpec, lo: u64, hi: u64) -> Self {
        Self { eq, lo, hi, colouring: None, non_degenerate_only: false }
    }

    pub fn with_colouring(mut self, colouring: &'a DiscreteColouring) -> Self {
        self.colouring = Some(colouring);
        self
    }

    pub fn non_degenerate(mut self, yes: bool) -> Self {
        self.non_degenerate_only = yes;
        self
    }

    fn validate(&self) -> Result<(), CountError> {
        if self.lo < 2 || self.hi < self.lo {
            return Err(CountError::Domain { lo: self.lo, hi: self.hi });
        }
        if let Some(c) = self.colouring {
            if c.lo() > self.lo || c.hi() < self.hi {
                return Err(CountError::ColouringDomain { lo: self.lo, hi: self.hi, c_lo: c.lo(), c_hi: c.hi() });
            }
        }
        Ok(())
    }
}

/// Lexicographic stream of solutions, see [`enumerate_solutions`].
pub struct SolutionIter<'a> {
    exps: Vec<u32>,
    lo: u64,
    hi: u64,
    colouring: Option<&'a DiscreteColouring>,
    non_degenerate_only: bool,
    xs: Vec<u64>,
    /// `prefix[i] = prod_{j < i} x_j^{a_j}`.
    prefix: Vec<u128>,
    /// `tail[i] = lo^{a_i + ... + a_{k-1}}`, saturating.
    tail: Vec<u128>,
    state: IterState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl<'a> SolutionIter<'a> {
    fn new(q: &CountQuery<'a>) -> Self {
        let exps = q.eq.exponents().to_vec();
        let k = exps.len();
        let mut tail = vec![1u128; k + 1];
        for i in (0..k).rev() {
            tail[i] = pow_sat(q.lo, exps[i]).saturating_mul(tail[i + 1]);
        }
        Self {
            exps,
            lo: q.lo,
            hi: q.hi,
            colouring: q.colouring,
            non_degenerate_only: q.non_degenerate_only,
            xs: vec![q.lo; k],
            prefix: vec![1; k + 1],
            tail,
            state: IterState::Fresh,
        }
    }

    /// Whether position `i` with its current value admits a completion.
    fn feasible(&mut self, i: usize) -> bool {
        let v = pow_sat(self.xs[i], self.exps[i]).saturating_mul(self.prefix[i]);
        self.prefix[i + 1] = v;
        v.saturating_mul(self.tail[i + 1]) <= u128::from(self.hi)
    }

    /// Sets positions `i..` to `lo`; false when that completion overshoots.
    fn reset_from(&mut self, i: usize) -> bool {
        let mut ok = true;
        for j in i..self.xs.len() {
            self.xs[j] = self.lo;
            ok &= self.feasible(j);
        }
        ok
    }

    fn advance(&mut self) -> bool {
        let mut i = self.xs.len() - 1;
        loop {
            self.xs[i] += 1;
            if self.feasible(i) {
                self.reset_from(i + 1);
                return true;
            }
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }

    fn current(&self) -> Option<MonoSolution> {
        let y = self.prefix[self.xs.len()] as u64;
        if self.non_degenerate_only && has_repeat(&self.xs) {
            return None;
        }
        let colour = match self.colouring {
            Some(c) => {
                let cy = c.colour(y);
                if self.xs.iter().any(|&x| c.colour(x) != cy) {
                    return None;
                }
                Some(cy)
            }
            None => None,
        };
        Some(MonoSolution::from_u64(&self.xs, y, colour))
    }
}

impl Iterator for SolutionIter<'_> {
    type Item = MonoSolution;

    fn next(&mut self) -> Option<MonoSolution> {
        loop {
            match self.state {
                IterState::Done => return None,
                IterState::Fresh => {
                    self.state = IterState::Running;
                    if !self.reset_from(0) {
                        self.state = IterState::Done;
                        continue;
                    }
                }
                IterState::Running => {
                    if !self.advance() {
                        self.state = IterState::Done;
                        continue;
                    }
                }
            }
            if let Some(s) = self.current() {
                return Some(s);
            }
        }
    }
}

#[inline]
fn pow_sat(x: u64, a: u32) -> u128 {
    u128::from(x).checked_pow(a).unwrap_or(u128::MAX)
}

/// Streams every solution in lexicographic order of `(x_1, ..., x_k)`.
/// With a colouring only monochromatic tuples are produced.
pub fn enumerate_solutions<'a>(q: &CountQuery<'a>) -> Result<SolutionIter<'a>, CountError> {
    q.validate()?;
    Ok(SolutionIter::new(q))
}

/// Exact counts for a query using the default execution policy.
pub fn count_solutions(q: &CountQuery<'_>) -> Result<CountReport, CountError> {
    count_solutions_with(q, Exec::default())
}

pub fn count_solutions_with(q: &CountQuery<'_>, exec: Exec) -> Result<CountReport, CountError> {
    q.validate()?;
    let mut report = match q.colouring {
        None => {
            let (total, non_degenerate) = count_uncoloured(q.eq.exponents(), q.lo, q.hi, exec);
            CountReport { total, non_degenerate, per_colour: BTreeMap::new() }
        }
        Some(c) if q.eq.exponents() == [1, 1] && c.len() > 4096 && c.runs().len() <= 64 => {
            count_xy_runs(&clip_runs(&c.runs(), q.lo, q.hi), q.lo, q.hi, exec)
        }
        Some(c) => count_coloured(q.eq.exponents(), q.lo, q.hi, c, exec),
    };
    if q.non_degenerate_only {
        report.total = report.non_degenerate;
        for v in report.per_colour.values_mut() {
            v.total = v.non_degenerate;
        }
    }
    Ok(report)
}

fn clip_runs(runs: &[(u64, u64, u8)], lo: u64, hi: u64) -> Vec<(u64, u64, u8)> {
    runs.iter()
        .filter(|&&(a, b, _)| b >= lo && a <= hi)
        .map(|&(a, b, c)| (a.max(lo), b.min(hi), c))
        .collect()
}

/// Uncoloured `(total, non_degenerate)` over `[lo, hi]`.
pub fn count_uncoloured(exps: &[u32], lo: u64, hi: u64, exec: Exec) -> (u64, u64) {
    let total = tuples_below(exps, lo, hi, exec);
    let mut distinct: i128 = 0;
    for partition in set_partitions(exps.len()) {
        let mut merged: Vec<u32> = partition.iter().map(|b| b.iter().map(|&i| exps[i]).sum()).collect();
        merged.sort_unstable();
        let mobius: i128 = partition
            .iter()
            .map(|b| {
                let s = b.len() as i128;
                let fact: i128 = (1..s).product();
                if s % 2 == 0 { -fact } else { fact }
            })
            .product();
        distinct += mobius * i128::from(tuples_below(&merged, lo, hi, exec));
    }
    (total, u64::try_from(distinct).expect("non-degenerate count is non-negative"))
}

/// Solutions with every `x_i` and `y` in `[1, hi]`, the range of the classical
/// asymptotic. Positions equal to 1 drop out, so this is a sum of `[2, hi]`
/// counts over the subsets of positions that are at least 2.
pub fn count_from_one(exps: &[u32], hi: u64, exec: Exec) -> u64 {
    let k = exps.len();
    (0u32..1 << k)
        .map(|mask| {
            let mut rest: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| exps[i]).collect();
            rest.sort_unstable();
            if rest.is_empty() {
                u64::from(hi >= 1)
            } else {
                tuples_below(&rest, 2, hi, exec)
            }
        })
        .sum()
}

/// `#{(x_1..x_k) in [lo, inf)^k : prod x_i^{a_i} <= n}` for sorted exponents.
pub fn tuples_below(exps: &[u32], lo: u64, n: u64, exec: Exec) -> u64 {
    match exps {
        [] => 1,
        [a] => {
            let r = iroot(n, *a);
            r.saturating_sub(lo - 1)
        }
        [1, 1] => hyperbola_pairs(lo, n),
        _ => {
            let (&last, rest) = exps.split_last().expect("non-empty");
            let rest_min = rest.iter().fold(1u128, |acc, &a| acc.saturating_mul(pow_sat(lo, a)));
            if rest_min > u128::from(n) {
                return 0;
            }
            let cap = (u128::from(n) / rest_min) as u64;
            let x_max = iroot(cap, last);
            if x_max < lo {
                return 0;
            }
            let inner = |x: u64| -> u64 {
                let xa = pow_sat(x, last) as u64;
                tuples_below(rest, lo, n / xa, Exec::Sequential)
            };
            exec.sum_range(lo..x_max + 1, inner)
        }
    }
}

/// `#{(x, y) : x, y >= lo, xy <= n}` by the hyperbola identity in `O(sqrt n)`.
pub fn hyperbola_pairs(lo: u64, n: u64) -> u64 {
    let s = iroot(n, 2);
    if s < lo {
        return 0;
    }
    let mut half = 0u64;
    for x in lo..=s {
        half += n / x - lo + 1;
    }
    let side = s - lo + 1;
    2 * half - side * side
}

/// All set partitions of `{0, .., k-1}` as lists of blocks.
fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, k, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    rec(0, k, &mut blocks, &mut out);
    out
}

type PerColour = Vec<ColourCount>;

fn report_from(per: PerColour) -> CountReport {
    let mut report = CountReport::default();
    // Slot 0 is unused: colours are 1-based.
    for (i, v) in per.into_iter().enumerate().skip(1) {
        report.total += v.total;
        report.non_degenerate += v.non_degenerate;
        report.per_colour.insert(i as u8, v);
    }
    report
}

/// Monochromatic counts against a dense colouring, streamed over `x_1`.
pub fn count_coloured(exps: &[u32], lo: u64, hi: u64, c: &DiscreteColouring, exec: Exec) -> CountReport {
    let k = exps.len();
    let r = usize::from(c.r());
    let mut tail = vec![1u128; k + 1];
    for i in (0..k).rev() {
        tail[i] = pow_sat(lo, exps[i]).saturating_mul(tail[i + 1]);
    }
    let x1_max = {
        let cap = u128::from(hi) / tail[1];
        iroot(cap.min(u128::from(u64::MAX)) as u64, exps[0])
    };
    if x1_max < lo {
        return report_from(vec![ColourCount::default(); r + 1]);
    }
    let per = exec.fold_range(
        lo..x1_max + 1,
        || vec![ColourCount::default(); r + 1],
        |mut acc, x1| {
            let colour = c.colour(x1);
            let mut xs = vec![0u64; k];
            xs[0] = x1;
            let prefix = pow_sat(x1, exps[0]);
            walk(exps, &tail, lo, hi, c, colour, 1, prefix, &mut xs, &mut acc[colour as usize]);
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    report_from(per)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    exps: &[u32],
    tail: &[u128],
    lo: u64,
    hi: u64,
    c: &DiscreteColouring,
    colour: u8,
    i: usize,
    prefix: u128,
    xs: &mut [u64],
    acc: &mut ColourCount,
) {
    if i == exps.len() {
        let y = prefix as u64;
        if c.colour(y) == colour {
            acc.total += 1;
            if !has_repeat(xs) {
                acc.non_degenerate += 1;
            }
        }
        return;
    }
    let mut x = lo;
    loop {
        let v = prefix.saturating_mul(pow_sat(x, exps[i]));
        if v.saturating_mul(tail[i + 1]) > u128::from(hi) {
            break;
        }
        if c.colour(x) == colour {
            xs[i] = x;
            walk(exps, tail, lo, hi, c, colour, i + 1, v, xs, acc);
        }
        x += 1;
    }
}

/// Monochromatic `xy = z` counts for a colouring given as constant runs
/// `(from, to, colour)` tiling `[lo, hi]`. Work is proportional to the
/// number of `x` values that can pair with some run, not to `hi`.
pub fn count_xy_runs(runs: &[(u64, u64, u8)], lo: u64, hi: u64, exec: Exec) -> CountReport {
    let r = runs.iter().map(|x| x.2).max().unwrap_or(1) as usize;
    let mut jobs = Vec::new();
    for (i, xi) in runs.iter().enumerate() {
        for yj in runs.iter().filter(|yj| yj.2 == xi.2) {
            jobs.push((i, *xi, *yj));
        }
    }
    let partial = exec.map(jobs, |(_, (xa, xb, colour), (ya, yb, _))| {
        let mut acc = ColourCount::default();
        let targets: Vec<(u64, u64)> = runs.iter().filter(|z| z.2 == colour).map(|z| (z.0, z.1)).collect();
        let x_hi = xb.min(hi / ya.max(lo));
        let mut x = xa.max(lo);
        while x <= x_hi {
            let y_lo = ya.max(lo);
            let y_hi = yb.min(hi / x);
            if y_lo <= y_hi {
                for &(za, zb) in &targets {
                    let from = y_lo.max(za.div_ceil(x));
                    let to = y_hi.min(zb / x);
                    if from <= to {
                        acc.total += to - from + 1;
                        if (from..=to).contains(&x) {
                            acc.non_degenerate += to - from;
                        } else {
                            acc.non_degenerate += to - from + 1;
                        }
                    }
                }
            }
            x += 1;
        }
        (colour, acc)
    });
    let mut per = vec![ColourCount::default(); r + 1];
    for (colour, acc) in partial {
        per[colour as usize] += acc;
    }
    report_from(per)
}

/// `C(a) = zeta(a_{m+1}) ... zeta(a_k) / (m-1)!`, the leading constant of the
/// uncoloured count `C(a) X (log X)^{m-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstant {
    pub eq: EquationSpec,
    pub value: f64,
    pub m: usize,
}

pub fn asymptotic_constant(eq: &EquationSpec) -> Result<AsymptoticConstant, CountError> {
    eq.require_regular()?;
    let m = eq.m();
    let zetas: f64 = eq.exponents()[m..].iter().map(|&a| arith::zeta(a)).product();
    let fact: f64 = (1..m).map(|i| i as f64).product();
    Ok(AsymptoticConstant { eq: eq.clone(), value: zetas / fact, m })
}
