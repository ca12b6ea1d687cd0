use thiserror::Error;

use crate::fock::ErrorTerm;

/// Failures raised by code construction, Hamiltonian synthesis and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error(
        "operator is not parity nested: cross-sector magnitude {residual:e} exceeds {threshold:e}"
    )]
    ParityViolation { residual: f64, threshold: f64 },

    #[error("error word for {term} is undefined: projected norm {norm:e}")]
    DegenerateError { term: ErrorTerm, norm: f64 },

    #[error("code does not correct {target}: {reason}")]
    NotCorrectable { target: String, reason: String },

    #[error("linear system is inconsistent: residual {residual:e}")]
    Inconsistent { residual: f64 },

    #[error("invalid witness configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid expansion order: jump power {m}, order {l}")]
    InvalidOrder { m: usize, l: usize },

    #[error("step-halving check failed: results differ by {deviation:e}")]
    StepSizeFailure { deviation: f64 },

    #[error("need at least 3 usable points for a log-log fit, found {0}")]
    InsufficientPoints(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
