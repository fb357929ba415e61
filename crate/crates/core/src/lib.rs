//! Exact combinatorics for monochromatic solutions of multiplicative equations
//! `x_1^{a_1} ... x_k^{a_k} = y` over colourings of integer intervals.
//!
//! The crate is organised around a handful of engines:
//!
//! * [`counting`]: exact enumeration and counting of (monochromatic) solutions,
//!   with hyperbola-method fast paths and the asymptotic reference constants.
//! * [`constructions`]: the interval colourings with few monochromatic products,
//!   the logarithmic lift of a real template, and the `Omega` colouring.
//! * [`additive_search`]: exhaustive search for Schur, shifted Schur and Rado
//!   numbers with complete extremal enumeration and DIMACS export.
//! * [`real_intervals`]: exact rational decision procedure for solution-free
//!   colourings of real intervals and the certificates built on it.
//! * [`verify`]: executable pattern lemmas, the stability check and an exact
//!   branch-and-bound minimiser.
//!
//! Data-parallel kernels go through [`exec::Exec`]; with the `parallel`
//! feature disabled every kernel runs sequentially and produces identical
//! results.

pub mod additive_search;
pub mod arith;
pub mod colouring;
pub mod constructions;
pub mod counting;
pub mod equation;
pub mod exec;
pub mod real_intervals;
pub mod solution;
pub mod verify;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use colouring::{canonicalize, parse_colouring, ColouringError, DiscreteColouring};
pub use equation::{EquationError, EquationSpec};
pub use exec::Exec;
pub use solution::{ColourCount, CountReport, MonoSolution};
