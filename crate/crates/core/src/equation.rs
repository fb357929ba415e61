//! Exponent vectors for `x_1^{a_1} ... x_k^{a_k} = y` and its additive shadow
//! `a_1 x_1 + ... + a_k x_k = y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("an equation needs at least two exponents, got {0}")]
    TooFewExponents(usize),
    #[error("exponents must be positive integers")]
    ZeroExponent,
    #[error("cannot parse exponent list {0:?}")]
    Parse(String),
    #[error("equation {0} has no exponent equal to 1 and is not partition regular")]
    NotRegular(EquationSpec),
}

/// Sorted exponent vector `a_1 <= ... <= a_k` with `k >= 2` and every `a_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct EquationSpec {
    exponents: Vec<u32>,
}

impl EquationSpec {
    pub fn new(mut exponents: Vec<u32>) -> Result<Self, EquationError> {
        if exponents.len() < 2 {
            return Err(EquationError::TooFewExponents(exponents.len()));
        }
        if exponents.contains(&0) {
            return Err(EquationError::ZeroExponent);
        }
        exponents.sort_unstable();
        Ok(Self { exponents })
    }

    /// The multiplicative Schur equation `xy = z`.
    pub fn schur() -> Self {
        Self { exponents: vec![1, 1] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of variables on the left-hand side.
    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    /// Number of exponents equal to one.
    pub fn m(&self) -> usize {
        self.exponents.iter().take_while(|&&a| a == 1).count()
    }

    /// Sum of all exponents.
    pub fn total(&self) -> u64 {
        self.exponents.iter().map(|&a| u64::from(a)).sum()
    }

    /// Sum of every exponent except the first (which is 1 for regular equations).
    pub fn tail_weight(&self) -> u64 {
        self.total() - u64::from(self.exponents[0])
    }

    /// Rado's criterion for this shape: at least one exponent equals one.
    pub fn is_regular(&self) -> bool {
        self.m() >= 1
    }

    pub fn require_regular(&self) -> Result<(), EquationError> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(EquationError::NotRegular(self.clone()))
        }
    }
}

impl TryFrom<Vec<u32>> for EquationSpec {
    type Error = EquationError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<EquationSpec> for Vec<u32> {
    fn from(e: EquationSpec) -> Self {
        e.exponents
    }
}

impl FromStr for EquationSpec {
    type Err = EquationError;

    /// Parses a comma separated list such as `1,2` or `1,1,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let exps = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| EquationError::Parse(s.to_string()))?;
        Self::new(exps)
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
