use thiserror::Error;

/// Errors raised by the evaluators and their inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: non-finite value")]
    NonFinite { op: &'static str },

    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid must be strictly increasing with at least two points")]
    GridNotIncreasing,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("velocity field singular at y = {y}, t = {t} (|psi| = {modulus:e})")]
    NodeSingularity { y: f64, t: f64, modulus: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(op: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { op })
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
