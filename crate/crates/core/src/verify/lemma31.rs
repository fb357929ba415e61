use serde::{Deserialize, Serialize};

use super::VerifyError;

/// `T_{a,l,k} = {l, k, lk, a, la, ka, lka, l^2 a, l^2 ka}` as a multiset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternT {
    pub a: u64,
    pub l: u64,
    pub k: u64,
}

impl PatternT {
    pub fn new(a: u64, l: u64, k: u64) -> Result<Self, VerifyError> {
        if a < 2 || l < 2 || k < 2 {
            return Err(VerifyError::Parameter(format!("a, l, k must be at least 2, got ({a}, {l}, {k})")));
        }
        Ok(Self { a, l, k })
    }

    pub fn elements(&self) -> [u64; 9] {
        let PatternT { a, l, k } = *self;
        [l, k, l * k, a, l * a, k * a, l * k * a, l * l * a, l * l * k * a]
    }

    /// Sorted distinct elements.
    pub fn distinct(&self) -> Vec<u64> {
        let mut v = self.elements().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `a not in {l, k, lk}`, `k not in {la, l^2 a}` and `l != ka`.
    pub fn side_conditions(&self) -> bool {
        let PatternT { a, l, k } = *self;
        a != l && a != k && a != l * k && k != l * a && k != l * l * a && l != k * a
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma31Report {
    pub pattern: PatternT,
    /// Colourings with `c(l) != c(k)` that were checked.
    pub colourings: u64,
    /// Every checked colouring has a monochromatic `xy = z` with `a | z`.
    pub holds: bool,
    pub side_conditions: bool,
    /// With the side conditions, every colouring also has one with `x != y`.
    pub nondegenerate_holds: Option<bool>,
    /// First failing colouring as `(element, colour)` pairs.
    pub counterexample: Option<Vec<(u64, u8)>>,
}

/// Exhausts the 2-colourings of `T_{a,l,k}` with `c(l) = 1` and `c(k) = 2`.
pub fn verify_lemma31(a: u64, l: u64, k: u64) -> Result<Lemma31Report, VerifyError> {
    let pattern = PatternT::new(a, l, k)?;
    let elems = pattern.distinct();
    let idx = |v: u64| elems.binary_search(&v).expect("element of T");
    let mut triples = Vec::new();
    for (i, &x) in elems.iter().enumerate() {
        for (j, &y) in elems.iter().enumerate().skip(i) {
            if let Some(z) = x.checked_mul(y).filter(|z| z % a == 0) {
                if let Ok(t) = elems.binary_search(&z) {
                    triples.push((i, j, t));
                }
            }
        }
    }
    let side = pattern.side_conditions();
    let mut report = Lemma31Report {
        pattern,
        colourings: 0,
        holds: true,
        side_conditions: side,
        nondegenerate_holds: side.then_some(true),
        counterexample: None,
    };
    if l == k {
        return Ok(report);
    }
    let (il, ik) = (idx(l), idx(k));
    let free: Vec<usize> = (0..elems.len()).filter(|&i| i != il && i != ik).collect();
    let mut colour = vec![0u8; elems.len()];
    colour[il] = 1;
    colour[ik] = 2;
    for mask in 0u32..(1 << free.len()) {
        for (bit, &i) in free.iter().enumerate() {
            colour[i] = 1 + ((mask >> bit) & 1) as u8;
        }
        report.colourings += 1;
        let mono = |&&(i, j, t): &&(usize, usize, usize)| colour[i] == colour[j] && colour[j] == colour[t];
        let any = triples.iter().any(|t| mono(&t));
        let nondeg = triples.iter().filter(|t| t.0 != t.1).any(|t| mono(&t));
        let failed = !any || (side && !nondeg);
        if !any {
            report.holds = false;
        }
        if side && !nondeg {
            report.nondegenerate_holds = Some(false);
        }
        if failed && report.counterexample.is_none() {
            report.counterexample = Some(elems.iter().copied().zip(colour.iter().copied()).collect());
        }
    }
    Ok(report)
}
