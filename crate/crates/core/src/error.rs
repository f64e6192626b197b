use thiserror::Error;

/// Errors produced by the transform engines, verifiers and detectors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid too small: need at least {min} samples, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error("distribution {0} requires a parameter set")]
    MissingParams(&'static str),
    #[error("distribution {0} does not take a parameter set")]
    UnexpectedParams(&'static str),
    #[error("fixture not aligned to the grid: {0}")]
    Alignment(String),
    #[error("parameter regime: {0}")]
    Regime(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line fit failed: {0}")]
    Fit(String),
    #[error("map kind mismatch: expected {expected}, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
