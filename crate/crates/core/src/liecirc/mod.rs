//! Exact graded Lie algebra of the functions `H_{k,h} = h(s) y^k / √(1 + y²)`
//! under the Poisson bracket, with trigonometric (closed curve) or
//! polynomial (interval) coefficients over the rationals.

mod coeff;
mod graded;
mod json;
mod span;
mod structure;

pub use coeff::{CoeffFn, Mode, Ring, TwoPiMultiple};
pub use graded::{bracket, GradedElement};
pub use json::{from_json, to_json};
pub use span::{closure_span, LevelStats, RowReducer, SpanReport, Window};
pub use structure::{average, gglob_membership, r_poly, rapav_check, OddConstraintReport, RapavCheck};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("averages are only defined for circle coefficients")]
    AverageOnInterval,
    #[error("truncation window too small: {0}")]
    WindowTooSmall(String),
    #[error("malformed element JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

/// `π_k e`.
pub fn project(e: &GradedElement, k: u32) -> CoeffFn {
    e.project(k)
}
