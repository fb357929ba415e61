//! Solution finders on `M_b = {2^{ji} b^i : i <= S, j <= W} u {2^j : j <= W}`
//! that follow the constructive steps of the pattern lemmas: colour each row
//! `j` by its pattern `xi(j)`, find a long monochromatic progression of rows,
//! then either solve inside one geometric row or pair a row with a power of 2.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::additive_search::AdditiveSystem;
use crate::equation::EquationSpec;
use crate::solution::{has_repeat, product, MonoSolution};

/// A colouring of `M_b`, stored by position: `rows[(j-1) S + (i-1)]` colours
/// `(2^j b)^i` and `powers[j-1]` colours `2^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternM {
    pub b: u64,
    pub s: u32,
    pub w: u32,
    pub r: u8,
    rows: Vec<u8>,
    powers: Vec<u8>,
}

impl PatternM {
    pub fn new(b: u64, s: u32, w: u32, r: u8, rows: Vec<u8>, powers: Vec<u8>) -> Result<Self, VerifyError> {
        if b < 3 || b.is_multiple_of(2) {
            return Err(VerifyError::Parameter(format!("b = {b} must be odd and at least 3")));
        }
        if s == 0 || w == 0 || r == 0 {
            return Err(VerifyError::Parameter("S, W and r must be positive".into()));
        }
        if rows.len() != (s * w) as usize || powers.len() != w as usize {
            return Err(VerifyError::Domain(format!(
                "expected {} row colours and {w} power colours, got {} and {}",
                s * w,
                rows.len(),
                powers.len()
            )));
        }
        if rows.iter().chain(&powers).any(|&c| c == 0 || c > r) {
            return Err(VerifyError::Domain(format!("colours must lie in 1..={r}")));
        }
        Ok(Self { b, s, w, r, rows, powers })
    }

    pub fn random<R: Rng>(b: u64, s: u32, w: u32, r: u8, rng: &mut R) -> Result<Self, VerifyError> {
        let rows = (0..s * w).map(|_| rng.gen_range(1..=r)).collect();
        let powers = (0..w).map(|_| rng.gen_range(1..=r)).collect();
        Self::new(b, s, w, r, rows, powers)
    }

    /// Colour of `(2^j b)^i`.
    pub fn row(&self, j: u32, i: u32) -> u8 {
        self.rows[((j - 1) * self.s + (i - 1)) as usize]
    }

    /// Colour of `2^j`.
    pub fn power(&self, j: u32) -> u8 {
        self.powers[(j - 1) as usize]
    }

    /// `(2^j b)^i`
    pub fn row_value(&self, j: u64, i: u32) -> BigUint {
        ((BigUint::one() << j) * self.b).pow(i)
    }

    /// Every element with its colour.
    pub fn elements(&self) -> Vec<(BigUint, u8)> {
        let mut out = Vec::with_capacity(self.rows.len() + self.powers.len());
        for j in 1..=self.w {
            for i in 1..=self.s {
                out.push((self.row_value(u64::from(j), i), self.row(j, i)));
            }
        }
        for j in 1..=self.w {
            out.push((BigUint::one() << j, self.power(j)));
        }
        out
    }

    fn pattern_key(&self, j: u32) -> &[u8] {
        let start = ((j - 1) * self.s) as usize;
        &self.rows[start..start + self.s as usize]
    }

    /// Progressions `j0, j0 + d, ..., j0 + (len-1) d` inside `[1, W]` with all
    /// rows sharing one pattern; smallest `d` first, then smallest `j0`.
    fn progressions(&self, len: u64) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        if len < 2 {
            return (1..=self.w).map(|j| (j, 1)).collect();
        }
        let w = u64::from(self.w);
        let max_d = (w - 1) / (len - 1);
        for d in 1..=max_d {
            for j0 in 1..=(w - (len - 1) * d) {
                let first = self.pattern_key(j0 as u32);
                if (1..len).all(|t| self.pattern_key((j0 + t * d) as u32) == first) {
                    out.push((j0 as u32, d as u32));
                }
            }
        }
        out
    }
}

/// A returned solution together with the progression and case that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternWitness {
    pub solution: MonoSolution,
    pub j0: u32,
    pub d: u32,
    /// 1: solved inside one row; 2: a row element paired with powers of 2.
    pub case: u8,
}

fn factorial(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

fn mono(sol_xs: Vec<BigUint>, y: BigUint, colour: u8) -> MonoSolution {
    MonoSolution::new(sol_xs, y, Some(colour))
}

/// Lemma-2.1 procedure for `xy = z` with progression length `S! + 1`.
pub fn find_in_pattern_m(m: &PatternM) -> Option<PatternWitness> {
    let len = factorial(m.s) + 1;
    let s_fact = factorial(m.s);
    for (j0, d) in m.progressions(len) {
        let colours_in_row = {
            let mut seen: Vec<u8> = m.pattern_key(j0).to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let row = |i: u32| m.row(j0, i);
        let case1 = || {
            // Schur triple i1 + i2 = i3 in the exponent colouring, distinct first.
            let mut degenerate = None;
            for i1 in 1..=m.s {
                for i2 in i1..=m.s - i1 {
                    if row(i1) == row(i2) && row(i2) == row(i1 + i2) {
                        if i1 != i2 {
                            let xs = vec![m.row_value(u64::from(j0), i1), m.row_value(u64::from(j0), i2)];
                            return Some(mono(xs, m.row_value(u64::from(j0), i1 + i2), row(i1)));
                        }
                        degenerate.get_or_insert(i1);
                    }
                }
            }
            degenerate.map(|i| {
                let (j0, d) = (u64::from(j0), u64::from(d));
                let xs = vec![m.row_value(j0, i), m.row_value(j0 + 2 * d, i)];
                mono(xs, m.row_value(j0 + d, 2 * i), row(i))
            })
        };
        let case2 = || {
            let e = s_fact * u64::from(d);
            let target = m.power(e as u32);
            (1..=m.s).find(|&i| row(i) == target).map(|i| {
                let x = m.row_value(u64::from(j0), i);
                let y = BigUint::one() << e;
                let z = m.row_value(u64::from(j0) + (s_fact / u64::from(i)) * u64::from(d), i);
                mono(vec![x, y], z, target)
            })
        };
        let found = if colours_in_row < m.r as usize {
            case1().map(|s| (s, 1)).or_else(|| case2().map(|s| (s, 2)))
        } else {
            case2().map(|s| (s, 2)).or_else(|| case1().map(|s| (s, 1)))
        };
        if let Some((solution, case)) = found {
            return Some(PatternWitness { solution, j0, d, case });
        }
    }
    None
}

/// Smallest `T` such that every `r`-colouring of `[T]` has same-coloured
/// `u_2, ..., u_k, v` with the `u_s` pairwise distinct and
/// `a_2 u_2 + ... + a_k u_k = A v`.
pub fn auxiliary_t(eq: &EquationSpec, r: u8, cap: u32) -> Result<u32, VerifyError> {
    for t in 1..=cap {
        let sols = auxiliary_solutions(eq, t);
        if !has_free_colouring(t, r, &sols) {
            return Ok(t);
        }
    }
    Err(VerifyError::Parameter(format!("auxiliary T exceeds {cap}")))
}

/// Tuples `(u_2, ..., u_k, v)` in `[1, t]` with distinct `u_s`.
fn auxiliary_solutions(eq: &EquationSpec, t: u32) -> Vec<Vec<u32>> {
    let tail = &eq.exponents()[1..];
    let a: u32 = tail.iter().sum();
    let mut out = Vec::new();
    let mut us = vec![1u32; tail.len()];
    loop {
        let sum: u32 = us.iter().zip(tail).map(|(u, a)| u * a).sum();
        if sum.is_multiple_of(a) && sum / a >= 1 && sum / a <= t && !has_repeat(&us) {
            let mut tuple = us.clone();
            tuple.push(sum / a);
            out.push(tuple);
        }
        let mut i = us.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if us[i] < t {
                us[i] += 1;
                break;
            }
            us[i] = 1;
        }
    }
}

fn has_free_colouring(t: u32, r: u8, sols: &[Vec<u32>]) -> bool {
    fn go(n: u32, t: u32, r: u8, used: u8, colour: &mut Vec<u8>, by_max: &[Vec<&Vec<u32>>]) -> bool {
        if n > t {
            return true;
        }
        for c in 1..=(used + 1).min(r) {
            colour.push(c);
            let ok = by_max[n as usize].iter().all(|s| !s.iter().all(|&v| colour[v as usize - 1] == c));
            if ok && go(n + 1, t, r, used.max(c), colour, by_max) {
                return true;
            }
            colour.pop();
        }
        false
    }
    let mut by_max: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); t as usize + 1];
    for s in sols {
        by_max[*s.iter().max().expect("non-empty") as usize].push(s);
    }
    go(1, t, r, 0, &mut Vec::new(), &by_max)
}

/// Lemma-5.1 procedure for `x_1^{a_1} ... x_k^{a_k} = y` with progression
/// length `1 + A T S!`, where `A = a_2 + ... + a_k` and `T` comes from
/// [`auxiliary_t`].
pub fn find_in_pattern_m_general(eq: &EquationSpec, m: &PatternM, t: u32) -> Result<Option<PatternWitness>, VerifyError> {
    eq.require_regular().map_err(|e| VerifyError::Parameter(e.to_string()))?;
    let exps = eq.exponents();
    let big_a = eq.tail_weight();
    let s_fact = factorial(m.s);
    let len = 1 + big_a * u64::from(t) * s_fact;
    let additive = AdditiveSystem::rado(eq.clone()).map_err(|e| VerifyError::Parameter(e.to_string()))?;
    let row_solutions = additive.solutions(u64::from(m.s));
    let aux = auxiliary_solutions(eq, t);
    for (j0, d) in m.progressions(len) {
        let row = |i: u64| m.row(j0, i as u32);
        let (j0w, dw) = (u64::from(j0), u64::from(d));
        let case1 = || {
            let sol = row_solutions.iter().find(|s| s.iter().all(|&v| row(v) == row(s[0])))?;
            let (is, tt) = (&sol[..exps.len()], sol[exps.len()]);
            let mut xs: Vec<BigUint> = Vec::with_capacity(is.len());
            let mut mu = 0u64;
            for (n, &i) in is.iter().enumerate() {
                let h = (0..=n as u64)
                    .find(|&h| {
                        let cand = m.row_value(j0w + dw * tt * h, i as u32);
                        !xs.contains(&cand)
                    })
                    .expect("pigeonhole");
                xs.push(m.row_value(j0w + dw * tt * h, i as u32));
                mu += u64::from(exps[n]) * h * i;
            }
            Some(mono(xs, m.row_value(j0w + mu * dw, tt as u32), row(is[0])))
        };
        let case2 = || {
            let step = s_fact * dw;
            if step * u64::from(t) > u64::from(m.w) {
                return None;
            }
            let sol = aux.iter().find(|s| s.iter().all(|&u| m.power((step * u64::from(u)) as u32) == m.power((step * u64::from(s[0])) as u32)))?;
            let colour = m.power((step * u64::from(sol[0])) as u32);
            let i = (1..=m.s).find(|&i| m.row(j0, i) == colour)?;
            let v = u64::from(*sol.last().expect("v"));
            let mut xs = vec![m.row_value(j0w, i)];
            xs.extend(sol[..sol.len() - 1].iter().map(|&u| BigUint::one() << (step * u64::from(u))));
            let y = m.row_value(j0w + (s_fact / u64::from(i)) * v * big_a * dw, i);
            Some(mono(xs, y, colour))
        };
        let distinct = {
            let mut seen: Vec<u8> = m.pattern_key(j0).to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let found = if distinct < m.r as usize {
            case1().map(|s| (s, 1)).or_else(|| case2().map(|s| (s, 2)))
        } else {
            case2().map(|s| (s, 2)).or_else(|| case1().map(|s| (s, 1)))
        };
        if let Some((solution, case)) = found {
            return Ok(Some(PatternWitness { solution, j0, d, case }));
        }
    }
    Ok(None)
}

/// What an independent check of a witness found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub in_pattern: bool,
    pub monochromatic: bool,
    pub non_degenerate: bool,
    pub product_holds: bool,
    pub divisible: bool,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.in_pattern && self.monochromatic && self.non_degenerate && self.product_holds && self.divisible
    }
}

/// Re-verifies a witness against the explicit elements of `M_b`, without
/// using the row/column bookkeeping of the finder.
pub fn check_witness(eq: &EquationSpec, m: &PatternM, sol: &MonoSolution) -> WitnessCheck {
    let colours: HashMap<BigUint, u8> = m.elements().into_iter().collect();
    let all: Vec<&BigUint> = sol.xs.iter().chain(std::iter::once(&sol.y)).collect();
    let found: Vec<Option<u8>> = all.iter().map(|v| colours.get(*v).copied()).collect();
    let in_pattern = found.iter().all(Option::is_some);
    let monochromatic = in_pattern && found.iter().all(|c| *c == found[0]) && sol.colour == found[0];
    let mut xs = sol.xs.clone();
    xs.sort();
    let non_degenerate = !has_repeat(&xs);
    let product_holds = sol.xs.len() == eq.k() && product(&sol.xs, eq) == sol.y;
    let divisible = (&sol.y % BigUint::from(m.b)) == BigUint::from(0u32);
    WitnessCheck { in_pattern, monochromatic, non_degenerate, product_holds, divisible }
}
