use thiserror::Error;

/// Errors raised by the g-frame toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-domain input (non-finite entries, empty matrices, bad exponents).
    #[error("invalid input: {0}")]
    Input(String),
    /// Operands whose shapes or index sets do not match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A mathematical precondition of the operation does not hold (e.g. not a frame).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Not enough usable data points for a fit or an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// The LAPACK backend reported a failure.
    #[error("linear algebra backend: {0}")]
    Backend(String),
}

pub type Result<T> = std::result::Result<T, Error>;
