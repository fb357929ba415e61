//! Interval colourings of `[2, N]` with few monochromatic products, the
//! logarithmic lift of a real template, the `Omega` colouring and the real
//! 2-colouring for `a_1 x_1 + ... + a_k x_k = y`.
//!
//! Large constructions are produced as runs so that counting at `N = 10^8`
//! never needs a dense array.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{big_iroot, big_omega_table, floor_power_bound};
use crate::colouring::{ColouringError, DiscreteColouring};
use crate::counting::{count_xy_runs, count_uncoloured};
use crate::equation::EquationSpec;
use crate::exec::Exec;
use crate::real_intervals::{floor_extend_left_open, Piece, Rational, RationalIntervalColouring};
use crate::solution::CountReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown construction {0:?} (expected one of {list})", list = Named::ALL.map(|n| n.name()).join(", "))]
    UnknownName(String),
    #[error("N = {n} is too small for {name}: interval {index} would be empty")]
    TooSmall { name: String, n: u64, index: usize },
    #[error("template ends before log N / log M: {x} is not covered")]
    TemplateTooShort { x: u64 },
    #[error("invalid lift: {0}")]
    Lift(String),
    #[error("Omega({x}) = {omega} lies outside the auxiliary colouring [{lo}, {hi}]")]
    OmegaDomain { x: u64, omega: u32, lo: u64, hi: u64 },
    #[error("the real 2-colouring needs a_1 = 1, got {0}")]
    LeadingExponent(EquationSpec),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
}

/// Colouring of `[lo, hi]` stored as maximal constant runs `(from, to, colour)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunColouring {
    lo: u64,
    hi: u64,
    r: u8,
    runs: Vec<(u64, u64, u8)>,
}

impl RunColouring {
    fn from_pieces(lo: u64, hi: u64, r: u8, pieces: impl IntoIterator<Item = (u64, u64, u8)>) -> Self {
        let mut runs: Vec<(u64, u64, u8)> = Vec::new();
        for (a, b, c) in pieces {
            if a > b {
                continue;
            }
            match runs.last_mut() {
                Some(last) if last.2 == c && last.1 + 1 == a => last.1 = b,
                _ => runs.push((a, b, c)),
            }
        }
        debug_assert!(runs.first().is_some_and(|r| r.0 == lo) && runs.last().is_some_and(|r| r.1 == hi));
        debug_assert!(runs.windows(2).all(|w| w[0].1 + 1 == w[1].0));
        Self { lo, hi, r, runs }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn runs(&self) -> &[(u64, u64, u8)] {
        &self.runs
    }

    pub fn colour(&self, n: u64) -> Option<u8> {
        let i = self.runs.partition_point(|run| run.1 < n);
        self.runs.get(i).filter(|run| run.0 <= n).map(|run| run.2)
    }

    /// The first run, `[lo, b]`.
    pub fn first_run(&self) -> (u64, u64, u8) {
        self.runs[0]
    }

    pub fn to_dense(&self) -> DiscreteColouring {
        DiscreteColouring::from_runs(self.lo, self.hi, self.r, &self.runs).expect("runs tile the domain")
    }

    /// Monochromatic `xy = z` counts over the whole domain.
    pub fn count_xy(&self, exec: Exec) -> CountReport {
        count_xy_runs(&self.runs, self.lo, self.hi, exec)
    }
}

impl From<&DiscreteColouring> for RunColouring {
    fn from(c: &DiscreteColouring) -> Self {
        RunColouring::from_pieces(c.lo(), c.hi(), c.r(), c.runs())
    }
}

/// The displayed interval colourings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Named {
    Prendiville2,
    Improved2,
    Prendiville3,
    Schur3,
    Improved3,
    #[serde(rename = "fourcolour_a")]
    FourColourA,
    #[serde(rename = "fourcolour_b")]
    FourColourB,
}

/// `(N^p / 2^s)^(1/q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerBound {
    pub p: u32,
    pub s: u32,
    pub q: u32,
}

impl PowerBound {
    pub const fn new(p: u32, s: u32, q: u32) -> Self {
        Self { p, s, q }
    }

    pub fn floor(&self, n: u64) -> u64 {
        floor_power_bound(n, self.p, self.s, self.q)
    }
}

const fn b(p: u32, s: u32, q: u32) -> PowerBound {
    PowerBound::new(p, s, q)
}

const R: u8 = 1;
const B: u8 = 2;
const G: u8 = 3;
const P: u8 = 4;

impl Named {
    pub const ALL: [Named; 7] = [
        Named::Prendiville2,
        Named::Improved2,
        Named::Prendiville3,
        Named::Schur3,
        Named::Improved3,
        Named::FourColourA,
        Named::FourColourB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Named::Prendiville2 => "prendiville2",
            Named::Improved2 => "improved2",
            Named::Prendiville3 => "prendiville3",
            Named::Schur3 => "schur3",
            Named::Improved3 => "improved3",
            Named::FourColourA => "fourcolour_a",
            Named::FourColourB => "fourcolour_b",
        }
    }

    pub fn r(self) -> u8 {
        match self {
            Named::Prendiville2 | Named::Improved2 => 2,
            Named::Prendiville3 | Named::Schur3 | Named::Improved3 => 3,
            Named::FourColourA | Named::FourColourB => 4,
        }
    }

    /// Upper ends of the intervals with their colours; the first interval
    /// starts at 2, every later one is left-open.
    pub fn layout(self) -> Vec<(PowerBound, u8)> {
        let n = b(1, 0, 1);
        match self {
            Named::Prendiville2 => vec![(b(1, 0, 2), R), (n, B)],
            Named::Improved2 => vec![(b(1, 1, 2), R), (b(1, 1, 1), B), (n, R)],
            Named::Prendiville3 => vec![(b(1, 0, 4), R), (b(1, 0, 2), B), (n, G)],
            Named::Schur3 => vec![(b(1, 0, 5), R), (b(2, 0, 5), B), (b(4, 0, 5), G), (n, B)],
            Named::Improved3 => vec![
                (b(1, 4, 5), R),
                (b(2, 8, 5), B),
                (b(2, 3, 5), R),
                (b(4, 6, 5), G),
                (b(4, 1, 5), R),
                (b(1, 1, 1), B),
                (n, R),
            ],
            Named::FourColourA => vec![
                (b(1, 0, 14), P),
                (b(2, 0, 14), R),
                (b(4, 0, 14), B),
                (b(5, 0, 14), R),
                (b(10, 0, 14), G),
                (b(11, 0, 14), R),
                (b(13, 0, 14), B),
                (n, R),
            ],
            Named::FourColourB => vec![
                (b(1, 0, 14), P),
                (b(2, 0, 14), R),
                (b(4, 0, 14), B),
                (b(5, 0, 14), R),
                (b(7, 0, 14), G),
                (b(8, 0, 14), R),
                (b(10, 0, 14), G),
                (b(11, 0, 14), R),
                (b(13, 0, 14), B),
                (n, R),
            ],
        }
    }

    /// Right end of the first interval, `[2, first_end(N)]`.
    pub fn first_end(self, n: u64) -> u64 {
        self.layout()[0].0.floor(n)
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Named {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Named::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| ConstructionError::UnknownName(s.to_string()))
    }
}

/// Runs of a named construction on `[2, N]`.
pub fn build_named_runs(name: Named, n: u64) -> Result<RunColouring, ConstructionError> {
    let mut pieces = Vec::new();
    let mut start = 2u64;
    for (index, (bound, colour)) in name.layout().into_iter().enumerate() {
        let end = bound.floor(n);
        if end < start {
            return Err(ConstructionError::TooSmall { name: name.name().into(), n, index });
        }
        pieces.push((start, end, colour));
        start = end + 1;
    }
    Ok(RunColouring::from_pieces(2, n, name.r(), pieces))
}

/// Dense colouring of `[2, N]` for a named construction.
pub fn build_named(name: &str, n: u64) -> Result<DiscreteColouring, ConstructionError> {
    Ok(build_named_runs(name.parse()?, n)?.to_dense())
}

/// A real template `xi` on `(1, T]` with `r - 1` colours, a threshold `M` and
/// the length `N` of the lifted colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSpec {
    pub xi: RationalIntervalColouring,
    pub m: u64,
    pub n: u64,
}

impl LiftSpec {
    pub fn new(xi: RationalIntervalColouring, m: u64, n: u64) -> Self {
        Self { xi, m, n }
    }

    /// Uses the smallest `M` with `M^T >= N`.
    pub fn with_default_threshold(xi: RationalIntervalColouring, n: u64) -> Self {
        let m = default_threshold(xi.hi(), n);
        Self { xi, m, n }
    }
}

/// Smallest integer `M >= 2` with `M^T >= N` for rational `T = p/q > 0`.
pub fn default_threshold(t: &Rational, n: u64) -> u64 {
    let p = t.0.numer().to_u32().expect("template end fits u32");
    let q = t.0.denom().to_u32().expect("template end fits u32");
    let target = BigUint::from(n).pow(q);
    let mut m = big_iroot(&target, p);
    if m.pow(p) < target {
        m += 1u32;
    }
    m.to_u64().expect("threshold below N").max(2)
}

/// Largest `x` with `x^q <= M^p` (`strict = false`) or `x^q < M^p` (`strict = true`).
fn power_cut(m: u64, e: &Rational, strict: bool) -> BigUint {
    let p = e.0.numer().to_u32().expect("endpoint numerator fits u32");
    let q = e.0.denom().to_u32().expect("endpoint denominator fits u32");
    let mp = BigUint::from(m).pow(p);
    let t = big_iroot(&mp, q);
    if strict && t.pow(q) == mp {
        t - 1u32
    } else {
        t
    }
}

/// Runs of the lift: colour `r` on `[2, M]`, and `xi(log x / log M)` for
/// `M < x <= N`, decided by exact power comparisons.
pub fn lift_runs(spec: &LiftSpec) -> Result<RunColouring, ConstructionError> {
    let LiftSpec { xi, m, n } = spec;
    let (m, n) = (*m, *n);
    if m < 2 {
        return Err(ConstructionError::Lift(format!("threshold M = {m} must be at least 2")));
    }
    if n < 2 {
        return Err(ConstructionError::Lift(format!("N = {n} must be at least 2")));
    }
    if xi.lo() != &Rational::integer(1) {
        return Err(ConstructionError::Lift(format!("template must start at 1, starts at {}", xi.lo())));
    }
    if xi.pieces().iter().any(|p| p.hi.0.is_negative()) {
        return Err(ConstructionError::Lift("negative endpoint".into()));
    }
    let r = xi.r() + 1;
    let big_n = BigUint::from(n);
    let mut pieces = vec![(2, m.min(n), r)];
    let mut next = BigUint::from(m) + 1u32;
    for piece in xi.pieces() {
        if next > big_n {
            break;
        }
        // Integers x > M with log x / log M inside the piece.
        let lo_cut = power_cut(m, &piece.lo, piece.lo_closed);
        let hi_cut = power_cut(m, &piece.hi, !piece.hi_closed);
        let from = (lo_cut + 1u32).max(next.clone());
        let to = hi_cut.min(big_n.clone());
        if from <= to {
            let (a, b) = (from.to_u64().expect("<= N"), to.to_u64().expect("<= N"));
            pieces.push((a, b, piece.colour));
            next = to + 1u32;
        }
    }
    if next <= big_n {
        return Err(ConstructionError::TemplateTooShort { x: next.to_u64().expect("<= N") });
    }
    Ok(RunColouring::from_pieces(2, n, r, pieces))
}

pub fn lift(spec: &LiftSpec) -> Result<DiscreteColouring, ConstructionError> {
    Ok(lift_runs(spec)?.to_dense())
}

/// `c(x) = xi(Omega(x))` on `[2, N]`, where `Omega` counts prime factors with
/// multiplicity.
pub fn build_omega(xi: &DiscreteColouring, n: u64) -> Result<DiscreteColouring, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::Lift(format!("N = {n} must be at least 2")));
    }
    let omega = big_omega_table(n);
    let mut colours = Vec::with_capacity((n - 1) as usize);
    for x in 2..=n {
        let w = u32::from(omega[x as usize]);
        match xi.get(u64::from(w)) {
            Some(c) => colours.push(c),
            None => return Err(ConstructionError::OmegaDomain { x, omega: w, lo: xi.lo(), hi: xi.hi() }),
        }
    }
    Ok(DiscreteColouring::new(2, xi.r(), colours)?)
}

/// Colour 1 on `[1, A) u [A^2, A^2 + A - 1)`, colour 2 on `[A, A^2)`.
pub fn build_rado2_real(eq: &EquationSpec) -> Result<RationalIntervalColouring, ConstructionError> {
    if eq.exponents()[0] != 1 {
        return Err(ConstructionError::LeadingExponent(eq.clone()));
    }
    let a = eq.total() as i64;
    let at = |v: i64| Rational(num_rational::BigRational::from_integer(BigInt::from(v)));
    let pieces = vec![
        Piece::closed_open(at(1), at(a), 1),
        Piece::closed_open(at(a), at(a * a), 2),
        Piece::closed_open(at(a * a), at(a * a + a - 1), 1),
    ];
    Ok(RationalIntervalColouring::new(pieces, 2).expect("valid layout"))
}

/// The 4-colouring of `(1, 41]` obtained from the simplest shifted Schur
/// extremal: piece `(k, k+1]` gets the colour of `k`.
pub fn interval_colouring_41() -> RationalIntervalColouring {
    let word = "RBBRGGGGGRBBRPPPPPPPPPPPPPPRBBRGGGGGRBBR";
    floor_extend_left_open(&DiscreteColouring::from_word(1, 4, word).expect("valid word"))
}

/// The 3-colourings of `(1, 14]` from the shifted Schur extremals of `[13]`.
pub fn interval_colourings_14() -> [RationalIntervalColouring; 2] {
    ["RBBRGGRGGRBBR", "RBBRGGGGGRBBR"]
        .map(|w| floor_extend_left_open(&DiscreteColouring::from_word(1, 3, w).expect("valid word")))
}

/// Uncoloured `(total, non_degenerate)` for `xy = z` over `[2, end]`: the
/// count every construction should reproduce.
pub fn prefix_count(end: u64, exec: Exec) -> (u64, u64) {
    if end < 2 {
        return (0, 0);
    }
    count_uncoloured(&[1, 1], 2, end, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_solutions, CountQuery};
    use crate::real_intervals::check_sumfree;

    fn runs(name: Named, n: u64) -> Vec<(u64, u64, u8)> {
        build_named_runs(name, n).unwrap().runs().to_vec()
    }

    #[test]
    fn improved2_at_100() {
        assert_eq!(runs(Named::Improved2, 100), vec![(2, 7, 1), (8, 50, 2), (51, 100, 1)]);
    }

    #[test]
    fn prendiville2_at_100() {
        assert_eq!(runs(Named::Prendiville2, 100), vec![(2, 10, 1), (11, 100, 2)]);
    }

    #[test]
    fn schur3_boundaries() {
        assert_eq!(
            runs(Named::Schur3, 100_000),
            vec![(2, 10, 1), (11, 100, 2), (101, 10_000, 3), (10_001, 100_000, 2)]
        );
    }

    #[test]
    fn improved3_boundaries() {
        // N = 2^20: N^(1/5)/2^(4/5) = 2^3.2, so the first interval is [2, 9].
        let got = runs(Named::Improved3, 1 << 20);
        let ends: Vec<u64> = got.iter().map(|r| r.1).collect();
        assert_eq!(ends[0], 9);
        assert_eq!(ends[5], 1 << 19);
        assert_eq!(got.iter().map(|r| r.2).collect::<Vec<_>>(), vec![1, 2, 1, 3, 1, 2, 1]);
    }

    #[test]
    fn names_round_trip_and_errors() {
        for n in Named::ALL {
            assert_eq!(n.name().parse::<Named>().unwrap(), n);
        }
        assert!(matches!("nope".parse::<Named>(), Err(ConstructionError::UnknownName(_))));
        assert!(matches!(build_named("schur3", 20), Err(ConstructionError::TooSmall { .. })));
        assert!(build_named("fourcolour_a", 1 << 14).is_ok());
    }

    #[test]
    fn dense_and_runs_agree() {
        let run = build_named_runs(Named::FourColourB, 1 << 15).unwrap();
        let dense = run.to_dense();
        for x in [2u64, 3, 100, 1000, 1 << 15] {
            assert_eq!(run.colour(x), Some(dense.colour(x)));
        }
        assert_eq!(run.colour(1), None);
        assert_eq!(RunColouring::from(&dense), run);
    }

    #[test]
    fn lift_single_piece() {
        let xi = RationalIntervalColouring::from_json(r#"[{"lo":"1","hi":"2","colour":1}]"#).unwrap();
        let c = lift_runs(&LiftSpec::new(xi, 10, 100)).unwrap();
        assert_eq!(c.runs(), &[(2, 10, 2), (11, 100, 1)]);
    }

    #[test]
    fn lift_rbbr_template_is_schur3_shaped() {
        let xi = RationalIntervalColouring::from_json(
            r#"[{"lo":"1","hi":"2","colour":1},{"lo":"2","hi":"4","colour":2},{"lo":"4","hi":"5","colour":1}]"#,
        )
        .unwrap();
        let c = lift_runs(&LiftSpec::new(xi, 10, 100_000)).unwrap();
        assert_eq!(c.runs(), &[(2, 10, 3), (11, 100, 1), (101, 10_000, 2), (10_001, 100_000, 1)]);
        let report = c.count_xy(Exec::default());
        assert_eq!(report.total, prefix_count(10, Exec::default()).0);
        assert!(report.per_colour.get(&1).is_none_or(|c| c.total == 0));
    }

    #[test]
    fn lift_rejects_short_template() {
        let xi = RationalIntervalColouring::from_json(r#"[{"lo":"1","hi":"2","colour":1}]"#).unwrap();
        assert_eq!(lift_runs(&LiftSpec::new(xi.clone(), 10, 101)), Err(ConstructionError::TemplateTooShort { x: 101 }));
        assert_eq!(LiftSpec::with_default_threshold(xi, 101).m, 11);
    }

    #[test]
    fn lift_fractional_endpoints() {
        // (1, 3/2] then (3/2, 2] with M = 4: 4^(3/2) = 8.
        let xi = RationalIntervalColouring::from_json(
            r#"[{"lo":"1","hi":"3/2","colour":1},{"lo":"3/2","hi":"2","colour":2}]"#,
        )
        .unwrap();
        let c = lift_runs(&LiftSpec::new(xi, 4, 16)).unwrap();
        assert_eq!(c.runs(), &[(2, 4, 3), (5, 8, 1), (9, 16, 2)]);
    }

    #[test]
    fn omega_lift_of_rbbr() {
        let xi = DiscreteColouring::from_word(1, 2, "RBBR").unwrap();
        let c = build_omega(&xi, 31).unwrap();
        assert_eq!(c.colour(12), 2);
        let report = count_solutions(&CountQuery::new(EquationSpec::schur(), 2, 31).with_colouring(&c)).unwrap();
        assert_eq!(report.total, 0);
        assert!(matches!(build_omega(&xi, 32), Err(ConstructionError::OmegaDomain { x: 32, omega: 5, .. })));
    }

    #[test]
    fn rado2_real_layouts() {
        let c = build_rado2_real(&EquationSpec::schur()).unwrap();
        assert_eq!(c.to_string(), "[1, 2):1 [2, 4):2 [4, 5):1");
        let eq12: EquationSpec = "1,2".parse().unwrap();
        let c = build_rado2_real(&eq12).unwrap();
        assert_eq!(c.to_string(), "[1, 3):1 [3, 9):2 [9, 11):1");
        assert!(check_sumfree(&c, &eq12).is_free());
        assert!(build_rado2_real(&"2,2".parse().unwrap()).is_err());
    }

    #[test]
    fn displayed_real_colourings_are_free() {
        let eq = EquationSpec::schur();
        assert!(check_sumfree(&interval_colouring_41(), &eq).is_free());
        for c in interval_colourings_14() {
            assert!(check_sumfree(&c, &eq).is_free());
        }
        assert_eq!(interval_colouring_41().merged().pieces().len(), 15);
    }
}
