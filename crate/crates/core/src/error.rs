use thiserror::Error;

/// Errors raised by the exact-arithmetic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational {0:?}: expected \"p\" or \"p/q\" with decimal integers")]
    ParseRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sigma must be nonzero")]
    ZeroSigma,
    #[error("dimension mismatch: expected r = {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("direction {direction} out of range 1..={r}")]
    Direction { direction: usize, r: usize },
    #[error("total degree {degree} exceeds cutoff {cutoff}")]
    BeyondCutoff { degree: usize, cutoff: usize },
    #[error("multi-index {0:?} is not present in the table")]
    MissingIndex(Vec<u32>),
    #[error("malformed table document: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;
