use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::colouring::DiscreteColouring;
use crate::counting::{count_solutions_with, CountQuery};
use crate::equation::EquationSpec;
use crate::exec::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    /// `[2, floor(N / 16M)]` is monochromatic.
    Pass,
    /// A prefix that should be monochromatic is not: a counterexample at this `N`.
    Fail,
    /// No monochromatic solutions, so there is nothing to check.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub n: u64,
    /// Monochromatic `xy = z` solutions, degenerate ones included.
    pub monochromatic: u64,
    /// `floor(N / 16M)`, or `None` when `M = 0`.
    pub prefix_end: Option<u64>,
    /// The prefix has at most one element.
    pub vacuous: bool,
    pub status: StabilityStatus,
    /// First element whose colour differs from that of 2, if any.
    pub first_change: Option<u64>,
}

/// Checks that a 2-colouring of `[2, N]` with `M >= 1` monochromatic products
/// is constant on `[2, floor(N / 16M)]`.
pub fn stability_check(c: &DiscreteColouring, exec: Exec) -> Result<StabilityReport, VerifyError> {
    if c.r() != 2 {
        return Err(VerifyError::Parameter(format!("stability needs a 2-colouring, got r = {}", c.r())));
    }
    if c.lo() != 2 {
        return Err(VerifyError::Parameter(format!("stability needs a colouring of [2, N], got [{}, {}]", c.lo(), c.hi())));
    }
    let n = c.hi();
    let report = count_solutions_with(&CountQuery::new(EquationSpec::schur(), 2, n).with_colouring(c), exec)
        .map_err(|e| VerifyError::Parameter(e.to_string()))?;
    let m = report.per_colour.values().map(|v| v.total).sum::<u64>();
    let first_change = (3..=n).find(|&x| c.colour(x) != c.colour(2));
    if m == 0 {
        return Ok(StabilityReport {
            n,
            monochromatic: 0,
            prefix_end: None,
            vacuous: true,
            status: StabilityStatus::NotApplicable,
            first_change,
        });
    }
    let end = n / (16 * m);
    let vacuous = end < 3;
    let constant = vacuous || first_change.is_none_or(|x| x > end);
    Ok(StabilityReport {
        n,
        monochromatic: m,
        prefix_end: Some(end),
        vacuous,
        status: if constant { StabilityStatus::Pass } else { StabilityStatus::Fail },
        first_change,
    })
}
