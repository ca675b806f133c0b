//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A sequence index could not be resolved to a map (e.g. an explicit
    /// schedule with no periodic tail, queried past its end).
    #[error("sequence index {index} does not resolve to a map: {reason}")]
    IndexUnresolvable { index: u64, reason: String },

    /// A trajectory left the declared analysis window of a real-line space.
    /// Reported, never silently clamped.
    #[error("point {value} escaped the analysis window [{lo}, {hi}] at step {step}")]
    DomainEscape {
        step: u64,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("expected a scalar point, got a {got}-dimensional vector")]
    ScalarExpected { got: usize },

    #[error("expected a {expected}-dimensional vector point, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Structural problem in a space, map, sequence, or schedule definition.
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A named run or operation parameter violated its invariant.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    /// An operation over base points requires them pairwise distinct.
    #[error("base points {i} and {j} coincide within the point-identity tolerance")]
    DuplicateBasePoints { i: usize, j: usize },

    /// An invariant-set check on a non-finitely-generated sequence needs an
    /// explicit map horizon.
    #[error("under-specified check: {0}")]
    UnderSpecified(String),

    /// Grid bisection hit its floor without finding a positive modulus.
    #[error("no positive equicontinuity modulus found above grid floor {floor}")]
    NoPositiveModulus { floor: f64 },

    /// Power-convergence probe exhausted its index cap.
    #[error("uniform convergence not observed within index cap {n_cap}")]
    ConvergenceNotObserved { n_cap: u64 },

    /// A pipeline hypothesis failed; distinct from an operational failure.
    #[error("hypothesis unmet: {hypothesis}")]
    HypothesisUnmet { hypothesis: String },

    #[error("numerical tolerance event: {0}")]
    NumericalTolerance(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_param(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// True for outcomes that mean "evidence absent" rather than "tool failed".
    pub fn is_hypothesis_unmet(&self) -> bool {
        matches!(self, Error::HypothesisUnmet { .. })
    }
}
