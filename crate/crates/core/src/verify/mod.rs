//! Executable pattern lemmas, the stability check and an exact minimiser for
//! the number of monochromatic solutions at small `N`.

mod lemma31;
mod minimize;
mod pattern;
mod stability;

use thiserror::Error;

pub use lemma31::{verify_lemma31, Lemma31Report, PatternT};
pub use minimize::{minimize, minimize_with_split, MinimizeReport, DEFAULT_BUDGET};
pub use pattern::{
    auxiliary_t, check_witness, find_in_pattern_m, find_in_pattern_m_general, PatternM, PatternWitness, WitnessCheck,
};
pub use stability::{stability_check, StabilityReport, StabilityStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{participating} participating elements exceed the budget of {budget}")]
    Budget { participating: usize, budget: usize },
    #[error("{0}")]
    Domain(String),
}
