//! Exhaustive search for Schur, shifted Schur and Rado numbers.
//!
//! A colouring of `[1, n]` is grown one element at a time. For every colour we
//! keep two bitmasks over `[0, 127]`: the elements of that colour and the
//! values that would complete a monochromatic solution if they joined it.
//! Colours are introduced in order (element 1 always gets colour 1, a new
//! colour only after all smaller ones are used), so each colouring is visited
//! once per class of colour permutations and every leaf is already canonical.

mod template;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::DiscreteColouring;
use crate::equation::{EquationError, EquationSpec};
use crate::exec::Exec;

pub use template::{check_template_5, template_5_words, TemplateError, TemplateReport, TEMPLATE_5};

/// Largest element the bitmask search can hold.
pub const MAX_ELEMENT: u64 = 127;

/// Searches with more colours than this are refused.
pub const MAX_COLOURS: u8 = 4;

/// Depth at which the search tree is cut into independent subtrees.
pub const SPLIT_DEPTH: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("every {r}-colouring search up to {limit} found a valid colouring of [{limit}]; the threshold exceeds the limit")]
    LimitExceeded { r: u8, limit: u64 },
    #[error("out of desk-scale scope: {0}")]
    OutOfScope(String),
    #[error("need at least one colour")]
    NoColours,
    #[error(transparent)]
    Equation(#[from] EquationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// `x + y = z`
    Schur,
    /// `x + y = z` or `x + y + 1 = z`
    SchurStar,
    /// `a_1 x_1 + ... + a_k x_k = y`
    Rado,
    /// the Rado equation or `a_1 x_1 + ... + a_k x_k + 1 = y`
    RadoStar,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Schur => "schur",
            SystemKind::SchurStar => "schur-star",
            SystemKind::Rado => "rado",
            SystemKind::RadoStar => "rado-star",
        }
    }

    fn shifted(self) -> bool {
        matches!(self, SystemKind::SchurStar | SystemKind::RadoStar)
    }
}

impl FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('_', "-").as_str() {
            "schur" => Ok(SystemKind::Schur),
            "schur-star" => Ok(SystemKind::SchurStar),
            "rado" => Ok(SystemKind::Rado),
            "rado-star" => Ok(SystemKind::RadoStar),
            _ => Err(format!("unknown system {s:?} (expected schur, schur-star, rado or rado-star)")),
        }
    }
}

/// One of the additive systems. Schur kinds carry the equation `(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveSystem {
    pub kind: SystemKind,
    pub eq: EquationSpec,
}

impl AdditiveSystem {
    pub fn schur() -> Self {
        Self { kind: SystemKind::Schur, eq: EquationSpec::schur() }
    }

    pub fn schur_star() -> Self {
        Self { kind: SystemKind::SchurStar, eq: EquationSpec::schur() }
    }

    pub fn rado(eq: EquationSpec) -> Result<Self, SearchError> {
        eq.require_regular()?;
        Ok(Self { kind: SystemKind::Rado, eq })
    }

    pub fn rado_star(eq: EquationSpec) -> Result<Self, SearchError> {
        eq.require_regular()?;
        Ok(Self { kind: SystemKind::RadoStar, eq })
    }

    /// Builds the system named by `kind`; `eq` is ignored for Schur kinds.
    pub fn from_kind(kind: SystemKind, eq: Option<EquationSpec>) -> Result<Self, SearchError> {
        match kind {
            SystemKind::Schur => Ok(Self::schur()),
            SystemKind::SchurStar => Ok(Self::schur_star()),
            SystemKind::Rado => Self::rado(eq.unwrap_or_else(EquationSpec::schur)),
            SystemKind::RadoStar => Self::rado_star(eq.unwrap_or_else(EquationSpec::schur)),
        }
    }

    fn is_plain_schur(&self) -> bool {
        self.eq.exponents() == [1, 1]
    }

    /// Values that complete a monochromatic solution inside `set`.
    fn forbidden(&self, set: u128) -> u128 {
        let mut sums: u128 = 1;
        for &a in self.eq.exponents() {
            let mut next = 0u128;
            let mut rest = set;
            while rest != 0 {
                let x = rest.trailing_zeros();
                rest &= rest - 1;
                next |= shl(sums, a.saturating_mul(x));
            }
            sums = next;
        }
        if self.kind.shifted() {
            sums | shl(sums, 1)
        } else {
            sums
        }
    }

    /// Every solution `(x_1, ..., x_k, y)` with all entries in `[1, n]`, in
    /// lexicographic order of the `x_i`.
    pub fn solutions(&self, n: u64) -> Vec<Vec<u64>> {
        let exps: Vec<u64> = self.eq.exponents().iter().map(|&a| u64::from(a)).collect();
        let shifted = self.kind.shifted();
        let mut out = Vec::new();
        let mut xs = Vec::with_capacity(exps.len() + 1);
        fn rec(exps: &[u64], i: usize, sum: u64, n: u64, shifted: bool, xs: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if i == exps.len() {
                for y in [sum, sum + 1].into_iter().take(if shifted { 2 } else { 1 }) {
                    if y <= n {
                        let mut t = xs.clone();
                        t.push(y);
                        out.push(t);
                    }
                }
                return;
            }
            let rest: u64 = exps[i + 1..].iter().sum();
            let mut x = 1;
            while sum + exps[i] * x + rest <= n {
                xs.push(x);
                rec(exps, i + 1, sum + exps[i] * x, n, shifted, xs, out);
                xs.pop();
                x += 1;
            }
        }
        rec(&exps, 0, 0, n, shifted, &mut xs, &mut out);
        out
    }
}

impl fmt::Display for AdditiveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SystemKind::Schur | SystemKind::SchurStar => f.write_str(self.kind.name()),
            _ => write!(f, "{}({})", self.kind.name(), self.eq),
        }
    }
}

#[inline]
fn shl(mask: u128, by: u32) -> u128 {
    if by >= 128 {
        0
    } else {
        mask << by
    }
}

/// Outcome of a threshold search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub system: AdditiveSystem,
    pub r: u8,
    /// Smallest `N` for which every `r`-colouring of `[N]` has a solution.
    pub threshold: u64,
    /// Valid colourings of `[threshold - 1]` up to permuting colours.
    pub extremal_count: u64,
    /// The same count without identifying colour permutations.
    pub raw_extremal_count: u64,
    pub extremals: Option<Vec<DiscreteColouring>>,
    pub nodes_visited: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Copy)]
struct State {
    sets: [u128; MAX_COLOURS as usize],
    forb: [u128; MAX_COLOURS as usize],
    used: u8,
}

impl State {
    fn empty() -> Self {
        State { sets: [0; MAX_COLOURS as usize], forb: [0; MAX_COLOURS as usize], used: 0 }
    }
}

struct Search<'a> {
    system: &'a AdditiveSystem,
    r: u8,
    /// Stop descending at this depth.
    cap: usize,
    /// Largest depth seen by any worker, used only to skip storing short leaves.
    global_best: &'a AtomicUsize,
}

#[derive(Default)]
struct Partial {
    nodes: u64,
    best: usize,
    leaves: Vec<Vec<u8>>,
    frontier: Vec<(State, Vec<u8>)>,
}

impl Partial {
    fn absorb(&mut self, other: Partial) {
        self.nodes += other.nodes;
        match other.best.cmp(&self.best) {
            std::cmp::Ordering::Greater => {
                self.best = other.best;
                self.leaves = other.leaves;
            }
            std::cmp::Ordering::Equal => self.leaves.extend(other.leaves),
            std::cmp::Ordering::Less => {}
        }
    }
}

impl Search<'_> {
    #[inline]
    fn child(&self, s: &State, c: usize, n: u32) -> State {
        let mut t = *s;
        let bit = 1u128 << n;
        t.sets[c] |= bit;
        if self.system.is_plain_schur() {
            t.forb[c] |= shl(t.sets[c], n);
            if self.system.kind.shifted() {
                t.forb[c] |= shl(t.sets[c], n + 1);
            }
        } else {
            t.forb[c] = self.system.forbidden(t.sets[c]);
        }
        t.used = t.used.max(c as u8 + 1);
        t
    }

    fn record(&self, word: &[u8], out: &mut Partial) {
        let d = word.len();
        if d > out.best {
            out.best = d;
            out.leaves.clear();
            self.global_best.fetch_max(d, Ordering::Relaxed);
        }
        if d == out.best && d >= self.global_best.load(Ordering::Relaxed) {
            out.leaves.push(word.to_vec());
        }
    }

    /// Depth-first walk. With `split = Some(d)` nodes at depth `d` are handed
    /// back as frontier instead of being expanded.
    fn walk(&self, s: &State, word: &mut Vec<u8>, split: Option<usize>, out: &mut Partial) {
        let d = word.len();
        if split == Some(d) {
            out.frontier.push((*s, word.clone()));
            return;
        }
        out.nodes += 1;
        self.record(word, out);
        if d == self.cap {
            return;
        }
        let n = d as u32 + 1;
        let bit = 1u128 << n;
        let top = (s.used + 1).min(self.r) as usize;
        for c in 0..top {
            if s.forb[c] & bit == 0 {
                let t = self.child(s, c, n);
                word.push(c as u8 + 1);
                self.walk(&t, word, split, out);
                word.pop();
            }
        }
    }

    fn run(&self, exec: Exec) -> Partial {
        let mut head = Partial::default();
        let split = SPLIT_DEPTH.min(self.cap);
        let mut word = Vec::new();
        self.walk(&State::empty(), &mut word, Some(split), &mut head);
        let frontier = std::mem::take(&mut head.frontier);
        let parts = exec.map(frontier, |(s, w)| {
            let mut out = Partial::default();
            let mut w = w;
            self.walk(&s, &mut w, None, &mut out);
            out
        });
        for p in parts {
            head.absorb(p);
        }
        head.leaves.sort();
        head
    }
}

fn check_scope(r: u8) -> Result<(), SearchError> {
    if r == 0 {
        return Err(SearchError::NoColours);
    }
    if r > MAX_COLOURS {
        return Err(SearchError::OutOfScope(format!(
            "{r} colours requested; searches are limited to {MAX_COLOURS} (S(5) = 161 needs a SAT solver)"
        )));
    }
    Ok(())
}

fn to_colourings(words: Vec<Vec<u8>>, r: u8) -> Vec<DiscreteColouring> {
    words.into_iter().map(|w| DiscreteColouring::new(1, r, w).expect("search colours are in range")).collect()
}

/// `r! / (r - used)!`: colourings in the permutation class of a canonical one.
fn class_size(r: u8, used: u8) -> u64 {
    ((r - used + 1)..=r).map(u64::from).product()
}

/// Smallest `N <= limit` such that every `r`-colouring of `[N]` contains a
/// monochromatic solution, with every extremal colouring of `[N - 1]`.
pub fn find_threshold(system: &AdditiveSystem, r: u8, limit: u64, exec: Exec) -> Result<SearchReport, SearchError> {
    check_scope(r)?;
    let start = Instant::now();
    let cap = limit.min(MAX_ELEMENT) as usize;
    let global = AtomicUsize::new(0);
    let search = Search { system, r, cap, global_best: &global };
    let result = search.run(exec);
    if result.best >= cap {
        return Err(if limit > MAX_ELEMENT {
            SearchError::OutOfScope(format!("threshold exceeds the {MAX_ELEMENT}-element search domain"))
        } else {
            SearchError::LimitExceeded { r, limit }
        });
    }
    let raw = result.leaves.iter().map(|w| class_size(r, *w.iter().max().unwrap_or(&0))).sum();
    Ok(SearchReport {
        system: system.clone(),
        r,
        threshold: result.best as u64 + 1,
        extremal_count: result.leaves.len() as u64,
        raw_extremal_count: raw,
        extremals: Some(to_colourings(result.leaves, r)),
        nodes_visited: result.nodes,
        wall_time: start.elapsed(),
    })
}

/// Every valid colouring of `[1, n]` with at most `r` colours, canonical and
/// sorted lexicographically.
pub fn enumerate_extremals(
    system: &AdditiveSystem,
    r: u8,
    n: u64,
    exec: Exec,
) -> Result<Vec<DiscreteColouring>, SearchError> {
    check_scope(r)?;
    if n > MAX_ELEMENT {
        return Err(SearchError::OutOfScope(format!("N = {n} exceeds the {MAX_ELEMENT}-element search domain")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let global = AtomicUsize::new(0);
    let search = Search { system, r, cap: n as usize, global_best: &global };
    let result = search.run(exec);
    if result.best < n as usize {
        return Ok(Vec::new());
    }
    Ok(to_colourings(result.leaves, r))
}

/// True iff `c` (over `[1, n]`) has no monochromatic solution of the system.
pub fn is_valid(system: &AdditiveSystem, c: &DiscreteColouring) -> bool {
    c.lo() == 1
        && system
            .solutions(c.hi())
            .iter()
            .all(|t| !t.iter().all(|&v| c.colour(v) == c.colour(t[0])))
}

/// One instance of `S*(r + t) >= 2 S(r) S*(t) - S(r) - S*(t) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub r: u32,
    pub t: u32,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    pub tight: bool,
}

/// Known or computed values of `S(r)` and `S*(t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurValues {
    pub schur: BTreeMap<u32, u64>,
    pub schur_star: BTreeMap<u32, u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MissingValue {
    #[error("no value for S({0})")]
    Schur(u32),
    #[error("no value for S*({0})")]
    SchurStar(u32),
}

pub fn check_abbott_hanson(values: &SchurValues, pairs: &[(u32, u32)]) -> Result<Vec<InequalityCheck>, MissingValue> {
    pairs
        .iter()
        .map(|&(r, t)| {
            let s = *values.schur.get(&r).ok_or(MissingValue::Schur(r))?;
            let st = *values.schur_star.get(&t).ok_or(MissingValue::SchurStar(t))?;
            let lhs = *values.schur_star.get(&(r + t)).ok_or(MissingValue::SchurStar(r + t))?;
            let rhs = (2 * s * st + 1).saturating_sub(s + st);
            Ok(InequalityCheck { r, t, lhs, rhs, holds: lhs >= rhs, tight: lhs == rhs })
        })
        .collect()
}

/// Writes a DIMACS CNF whose models are exactly the valid `r`-colourings of
/// `[1, n]`. Variable `(x - 1) r + c` says that `x` has colour `c`.
pub fn export_cnf<W: Write>(system: &AdditiveSystem, r: u8, n: u64, out: &mut W) -> io::Result<CnfStats> {
    let r64 = u64::from(r);
    let var = |x: u64, c: u64| ((x - 1) * r64 + c) as i64;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for x in 1..=n {
        clauses.push((1..=r64).map(|c| var(x, c)).collect());
        for c in 1..=r64 {
            for d in (c + 1)..=r64 {
                clauses.push(vec![-var(x, c), -var(x, d)]);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for tuple in system.solutions(n) {
        let mut elems = tuple.clone();
        elems.sort_unstable();
        elems.dedup();
        if seen.insert(elems.clone()) {
            for c in 1..=r64 {
                clauses.push(elems.iter().map(|&x| -var(x, c)).collect());
            }
        }
    }
    let stats = CnfStats { variables: n * r64, clauses: clauses.len() as u64 };
    writeln!(out, "c {} with {r} colours on [1, {n}]", system)?;
    writeln!(out, "p cnf {} {}", stats.variables, stats.clauses)?;
    for clause in &clauses {
        for lit in clause {
            write!(out, "{lit} ")?;
        }
        writeln!(out, "0")?;
    }
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfStats {
    pub variables: u64,
    pub clauses: u64,
}

pub fn export_cnf_to_path(system: &AdditiveSystem, r: u8, n: u64, path: &Path) -> io::Result<CnfStats> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    let stats = export_cnf(system, r, n, &mut file)?;
    file.flush()?;
    Ok(stats)
}
