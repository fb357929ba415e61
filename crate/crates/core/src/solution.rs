//! Solution witnesses and count reports.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::equation::EquationSpec;

/// A solution `(x_1, ..., x_k, y)` of `x_1^{a_1} ... x_k^{a_k} = y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonoSolution {
    #[serde(with = "big_vec")]
    pub xs: Vec<BigUint>,
    #[serde(with = "big")]
    pub y: BigUint,
    /// Shared colour of every entry, when the solution was taken from a colouring.
    pub colour: Option<u8>,
    /// Some `x_i = x_j` with `i != j`. `y` is not compared.
    pub degenerate: bool,
}

impl MonoSolution {
    pub fn new(xs: Vec<BigUint>, y: BigUint, colour: Option<u8>) -> Self {
        let degenerate = has_repeat(&xs);
        Self { xs, y, colour, degenerate }
    }

    pub fn from_u64(xs: &[u64], y: u64, colour: Option<u8>) -> Self {
        Self::new(xs.iter().map(|&x| BigUint::from(x)).collect(), BigUint::from(y), colour)
    }

    /// Recomputes `prod x_i^{a_i}` and compares with `y`.
    pub fn satisfies(&self, eq: &EquationSpec) -> bool {
        self.xs.len() == eq.k() && product(&self.xs, eq) == self.y
    }
}

pub(crate) fn has_repeat<T: Ord>(xs: &[T]) -> bool {
    let mut sorted: Vec<&T> = xs.iter().collect();
    sorted.sort();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// `prod x_i^{a_i}` in arbitrary precision.
pub fn product(xs: &[BigUint], eq: &EquationSpec) -> BigUint {
    xs.iter().zip(eq.exponents()).fold(BigUint::one(), |acc, (x, &a)| acc * x.pow(a))
}

/// Ordered-tuple counts restricted to one colour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourCount {
    pub total: u64,
    pub non_degenerate: u64,
}

impl std::ops::AddAssign for ColourCount {
    fn add_assign(&mut self, rhs: Self) {
        self.total += rhs.total;
        self.non_degenerate += rhs.non_degenerate;
    }
}

/// Counts of ordered solution tuples; per-colour entries only when a colouring
/// was supplied, in which case `total` counts monochromatic tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub total: u64,
    pub non_degenerate: u64,
    pub per_colour: BTreeMap<u8, ColourCount>,
}

impl CountReport {
    pub fn merge(mut self, other: CountReport) -> CountReport {
        self.total += other.total;
        self.non_degenerate += other.non_degenerate;
        for (c, v) in other.per_colour {
            *self.per_colour.entry(c).or_default() += v;
        }
        self
    }
}

mod big {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod big_vec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}
