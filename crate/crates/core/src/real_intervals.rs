//! Colourings of real intervals by finitely many rational-endpoint pieces,
//! and an exact decision procedure for monochromatic solutions of
//! `a_1 x_1 + ... + a_k x_k = y`.
//!
//! Every endpoint carries its own closedness flag. The weighted Minkowski sum
//! `a_1 I_1 + ... + a_k I_k` of intervals is again an interval whose lower end
//! is closed iff every lower end is closed (same for upper ends), so a
//! monochromatic solution exists iff for some colour and some choice of pieces
//! that sum meets a piece `J` of the same colour.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::colouring::DiscreteColouring;
use crate::equation::EquationSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("malformed colouring: {0}")]
    Malformed(String),
    #[error("cannot parse rational {0:?}")]
    Rational(String),
    #[error("template JSON: {0}")]
    Json(String),
}

/// Exact rational with a `"p/q"` text form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(p: i64, q: i64) -> Self {
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }
}

impl FromStr for Rational {
    type Err = IntervalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IntervalError::Rational(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::integer(n)),
        }
    }
}

fn default_false() -> bool {
    false
}

fn default_true() -> bool {
    true
}

/// One coloured piece. Defaults to the left-open, right-closed shape `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub colour: u8,
    #[serde(default = "default_false")]
    pub lo_closed: bool,
    #[serde(default = "default_true")]
    pub hi_closed: bool,
}

impl Piece {
    pub fn new(lo: Rational, hi: Rational, colour: u8, lo_closed: bool, hi_closed: bool) -> Self {
        Self { lo, hi, colour, lo_closed, hi_closed }
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: Rational, hi: Rational, colour: u8) -> Self {
        Self::new(lo, hi, colour, false, true)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: Rational, hi: Rational, colour: u8) -> Self {
        Self::new(lo, hi, colour, true, false)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let above = if self.lo_closed { *x >= self.lo.0 } else { *x > self.lo.0 };
        let below = if self.hi_closed { *x <= self.hi.0 } else { *x < self.hi.0 };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo.0 > self.hi.0 || (self.lo.0 == self.hi.0 && !(self.lo_closed && self.hi_closed))
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}:{}", self.lo, self.hi, self.colour)
    }
}

/// Ordered pieces tiling one real interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalIntervalColouring {
    pieces: Vec<Piece>,
    r: u8,
}

impl RationalIntervalColouring {
    /// Checks that the pieces are non-empty, in order, and meet with
    /// complementary closedness.
    pub fn new(pieces: Vec<Piece>, r: u8) -> Result<Self, IntervalError> {
        if pieces.is_empty() {
            return Err(IntervalError::Malformed("no pieces".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.is_empty() {
                return Err(IntervalError::Malformed(format!("piece {i} {p} is empty")));
            }
            if p.colour < 1 || p.colour > r {
                return Err(IntervalError::Malformed(format!("piece {i} has colour {} outside 1..={r}", p.colour)));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[0].hi != w[1].lo || w[0].hi_closed == w[1].lo_closed {
                return Err(IntervalError::Malformed(format!(
                    "pieces {i} {} and {} {} do not meet exactly",
                    w[0],
                    i + 1,
                    w[1]
                )));
            }
        }
        Ok(Self { pieces, r })
    }

    /// Number of colours is taken to be the largest colour used.
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self, IntervalError> {
        let r = pieces.iter().map(|p| p.colour).max().unwrap_or(1);
        Self::new(pieces, r)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn lo(&self) -> &Rational {
        &self.pieces[0].lo
    }

    pub fn hi(&self) -> &Rational {
        &self.pieces[self.pieces.len() - 1].hi
    }

    pub fn lo_closed(&self) -> bool {
        self.pieces[0].lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.pieces[self.pieces.len() - 1].hi_closed
    }

    pub fn colour_at(&self, x: &BigRational) -> Option<u8> {
        self.pieces.iter().find(|p| p.contains(x)).map(|p| p.colour)
    }

    /// Joins neighbouring pieces of the same colour.
    pub fn merged(&self) -> Self {
        let mut out: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            match out.last_mut() {
                Some(last) if last.colour == p.colour => {
                    last.hi = p.hi.clone();
                    last.hi_closed = p.hi_closed;
                }
                _ => out.push(p.clone()),
            }
        }
        Self { pieces: out, r: self.r }
    }

    /// Parses template JSON: either a bare list of pieces
    /// `{"lo": "p/q", "hi": "p/q", "colour": c}` or `{"r": r, "pieces": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, IntervalError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            List(Vec<Piece>),
            Object { r: Option<u8>, pieces: Vec<Piece> },
        }
        match serde_json::from_str::<Repr>(text).map_err(|e| IntervalError::Json(e.to_string()))? {
            Repr::List(p) => Self::from_pieces(p),
            Repr::Object { r: Some(r), pieces } => Self::new(pieces, r),
            Repr::Object { r: None, pieces } => Self::from_pieces(pieces),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl<'de> Deserialize<'de> for RationalIntervalColouring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pieces: Vec<Piece>,
            r: u8,
        }
        let raw = Raw::deserialize(d)?;
        Self::new(raw.pieces, raw.r).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RationalIntervalColouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Real interval with closedness flags; used for Minkowski sums.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Span {
    lo: BigRational,
    hi: BigRational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Span {
    fn of(p: &Piece) -> Self {
        Span { lo: p.lo.0.clone(), hi: p.hi.0.clone(), lo_closed: p.lo_closed, hi_closed: p.hi_closed }
    }

    fn scaled_sum(parts: &[(&Piece, u32)]) -> Self {
        let mut s = Span { lo: BigRational::zero(), hi: BigRational::zero(), lo_closed: true, hi_closed: true };
        for (p, a) in parts {
            let a = BigRational::from_integer(BigInt::from(*a));
            s.lo += &p.lo.0 * &a;
            s.hi += &p.hi.0 * &a;
            s.lo_closed &= p.lo_closed;
            s.hi_closed &= p.hi_closed;
        }
        s
    }

    fn intersect(&self, other: &Span) -> Option<Span> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let nonempty = lo < hi || (lo == hi && lo_closed && hi_closed);
        nonempty.then_some(Span { lo, hi, lo_closed, hi_closed })
    }

    /// Midpoint, or the single point of a degenerate span.
    fn sample(&self) -> BigRational {
        if self.lo == self.hi {
            self.lo.clone()
        } else {
            (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
        }
    }
}

/// A monochromatic real solution `sum a_i x_i = y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealWitness {
    pub xs: Vec<Rational>,
    pub y: Rational,
    pub colour: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SumFreeOutcome {
    Free,
    Witness(RealWitness),
}

impl SumFreeOutcome {
    pub fn is_free(&self) -> bool {
        matches!(self, SumFreeOutcome::Free)
    }
}

/// Decides whether the colouring has same-coloured `x_1..x_k, y` with
/// `a_1 x_1 + ... + a_k x_k = y`, returning an exact witness when it does.
pub fn check_sumfree(col: &RationalIntervalColouring, eq: &EquationSpec) -> SumFreeOutcome {
    let k = eq.k();
    for colour in 1..=col.r() {
        let class: Vec<&Piece> = col.pieces().iter().filter(|p| p.colour == colour).collect();
        if class.is_empty() {
            continue;
        }
        // Odometer over k-tuples of pieces of this colour.
        let mut idx = vec![0usize; k];
        'tuples: loop {
            let parts: Vec<(&Piece, u32)> = idx.iter().zip(eq.exponents()).map(|(&i, &a)| (class[i], a)).collect();
            let sum = Span::scaled_sum(&parts);
            for target in &class {
                if let Some(meet) = sum.intersect(&Span::of(target)) {
                    let y = meet.sample();
                    let xs = decompose(&parts, &sum, &y);
                    return SumFreeOutcome::Witness(RealWitness {
                        xs: xs.into_iter().map(Rational).collect(),
                        y: Rational(y),
                        colour,
                    });
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'tuples;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < class.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    SumFreeOutcome::Free
}

/// Points `x_i` in each piece with `sum a_i x_i = y`, for `y` in the sum
/// span: every `x_i` sits at the same relative position `t` inside its piece.
fn decompose(parts: &[(&Piece, u32)], sum: &Span, y: &BigRational) -> Vec<BigRational> {
    let width = &sum.hi - &sum.lo;
    let t = if width.is_zero() { BigRational::zero() } else { (y - &sum.lo) / width };
    parts
        .iter()
        .map(|(p, _)| &p.lo.0 + (&p.hi.0 - &p.lo.0) * &t)
        .collect()
}

/// Independent check of a witness: every point has the claimed colour and the
/// weighted sum holds.
pub fn verify_witness(col: &RationalIntervalColouring, eq: &EquationSpec, w: &RealWitness) -> bool {
    if w.xs.len() != eq.k() {
        return false;
    }
    let same_colour =
        w.xs.iter().chain(std::iter::once(&w.y)).all(|v| col.colour_at(&v.0) == Some(w.colour));
    let sum = w
        .xs
        .iter()
        .zip(eq.exponents())
        .fold(BigRational::zero(), |acc, (x, &a)| acc + &x.0 * BigRational::from_integer(BigInt::from(a)));
    same_colour && sum == w.y.0
}

/// `[k, k+1)` coloured `xi(k)` for each `k` in `[lo, hi]` of the integer colouring.
pub fn floor_extend(xi: &DiscreteColouring) -> RationalIntervalColouring {
    let pieces = (xi.lo()..=xi.hi())
        .map(|k| Piece::closed_open(Rational::integer(k as i64), Rational::integer(k as i64 + 1), xi.colour(k)))
        .collect();
    RationalIntervalColouring::new(pieces, xi.r()).expect("unit pieces tile")
}

/// `(k, k+1]` coloured `xi(k)`: the same extension on the left-open convention,
/// covering `(lo, hi + 1]`.
pub fn floor_extend_left_open(xi: &DiscreteColouring) -> RationalIntervalColouring {
    let pieces = (xi.lo()..=xi.hi())
        .map(|k| Piece::open_closed(Rational::integer(k as i64), Rational::integer(k as i64 + 1), xi.colour(k)))
        .collect();
    RationalIntervalColouring::new(pieces, xi.r()).expect("unit pieces tile")
}

/// Self-contained record that the colouring of `(lo, T]` (or `[lo, T)`) has
/// no monochromatic solution, so the interval Rado number is at least `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub bound: Rational,
    pub r: u8,
    pub eq: EquationSpec,
    pub colouring: RationalIntervalColouring,
    pub verified: bool,
    pub witness: Option<RealWitness>,
}

impl Certificate {
    /// Re-runs the decision procedure and checks the record is consistent.
    pub fn reverify(&self) -> bool {
        let outcome = check_sumfree(&self.colouring, &self.eq);
        let bound_ok = &self.bound == self.colouring.hi() && self.colouring.r() <= self.r;
        match (&outcome, self.verified, &self.witness) {
            (SumFreeOutcome::Free, true, None) => bound_ok,
            (SumFreeOutcome::Witness(_), false, Some(w)) => verify_witness(&self.colouring, &self.eq, w),
            _ => false,
        }
    }
}

/// Checks `col` and produces a certificate for `I_eq(r) >= T`, where `T` is the
/// right end of the colouring. A failed check carries a witness instead.
pub fn certify_interval_lower_bound(eq: &EquationSpec, r: u8, col: &RationalIntervalColouring) -> Certificate {
    let outcome = check_sumfree(col, eq);
    let (verified, witness) = match outcome {
        SumFreeOutcome::Free => (col.r() <= r, None),
        SumFreeOutcome::Witness(w) => (false, Some(w)),
    };
    Certificate { bound: col.hi().clone(), r, eq: eq.clone(), colouring: col.clone(), verified, witness }
}

/// Sorted list of piece boundaries including both ends.
pub fn boundaries(col: &RationalIntervalColouring) -> Vec<Rational> {
    let mut out = vec![col.lo().clone()];
    out.extend(col.pieces().iter().map(|p| p.hi.clone()));
    out
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn eq11() -> EquationSpec {
        EquationSpec::schur()
    }

    #[test]
    fn rational_text() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("5").to_string(), "5");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn single_half_open_piece_is_free() {
        let col = RationalIntervalColouring::new(vec![Piece::closed_open(q("1"), q("2"), 1)], 1).unwrap();
        assert_eq!(check_sumfree(&col, &eq11()), SumFreeOutcome::Free);
    }

    #[test]
    fn closed_piece_has_endpoint_witness() {
        let col = RationalIntervalColouring::new(vec![Piece::new(q("1"), q("2"), 1, true, true)], 1).unwrap();
        match check_sumfree(&col, &eq11()) {
            SumFreeOutcome::Witness(w) => {
                assert_eq!(w.xs, vec![q("1"), q("1")]);
                assert_eq!(w.y, q("2"));
                assert!(verify_witness(&col, &eq11(), &w));
            }
            SumFreeOutcome::Free => panic!("[1,2] contains 1 + 1 = 2"),
        }
    }

    #[test]
    fn rejects_gaps_and_overlaps() {
        let gap = vec![Piece::closed_open(q("1"), q("2"), 1), Piece::open_closed(q("2"), q("3"), 2)];
        assert!(RationalIntervalColouring::new(gap, 2).is_err());
        let overlap = vec![Piece::new(q("1"), q("2"), 1, true, true), Piece::new(q("2"), q("3"), 2, true, true)];
        assert!(RationalIntervalColouring::new(overlap, 2).is_err());
        let ok = vec![Piece::new(q("1"), q("2"), 1, true, true), Piece::open_closed(q("2"), q("3"), 2)];
        assert!(RationalIntervalColouring::new(ok, 2).is_ok());
        assert!(RationalIntervalColouring::new(vec![Piece::closed_open(q("2"), q("2"), 1)], 1).is_err());
    }

    #[test]
    fn floor_extension_of_rbbr() {
        let xi = DiscreteColouring::from_word(1, 2, "RBBR").unwrap();
        let col = floor_extend(&xi);
        let shown: Vec<String> = col.pieces().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["[1, 2):1", "[2, 3):2", "[3, 4):2", "[4, 5):1"]);
        assert!(check_sumfree(&col, &eq11()).is_free());
        let single = floor_extend(&DiscreteColouring::from_word(1, 1, "R").unwrap());
        assert_eq!(single.pieces().len(), 1);
    }

    #[test]
    fn template_json_round_trip() {
        let text = r#"[{"lo":"1","hi":"2","colour":1},{"lo":"2","hi":"4","colour":2},{"lo":"4","hi":"5","colour":1}]"#;
        let col = RationalIntervalColouring::from_json(text).unwrap();
        assert_eq!(col.r(), 2);
        assert!(!col.lo_closed() && col.hi_closed());
        let back = RationalIntervalColouring::from_json(&col.to_json()).unwrap();
        assert_eq!(back, col);
        assert!(RationalIntervalColouring::from_json(r#"[{"lo":"1","hi":"2","colour":1},{"lo":"3","hi":"4","colour":1}]"#).is_err());
    }

    #[test]
    fn certificate_reverifies() {
        let xi = DiscreteColouring::from_word(1, 2, "RBBR").unwrap();
        let cert = certify_interval_lower_bound(&eq11(), 2, &floor_extend_left_open(&xi));
        assert!(cert.verified);
        assert_eq!(cert.bound, q("5"));
        assert!(cert.reverify());
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert!(back.reverify());
        let mut forged = back.clone();
        forged.colouring = RationalIntervalColouring::new(vec![Piece::new(q("1"), q("5"), 1, false, true)], 1).unwrap();
        assert!(!forged.reverify());
    }
}
