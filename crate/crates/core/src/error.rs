use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("inconsistent solution: {0}")]
    InconsistentSolution(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("cutoff too small: tail mass {tail:e} exceeds tolerance {tol:e}")]
    CutoffTooSmall { tail: f64, tol: f64 },
    #[error("layer too small: clipped mass {clipped:e} exceeds tolerance {tol:e}")]
    LayerTooSmall { clipped: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("eigensolver failed to converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
