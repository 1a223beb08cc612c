use thiserror::Error;

/// Errors raised by parameter validation across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite matrix entry at index {0}")]
    NonFinite(usize),

    #[error("matrix of dimension {n} exceeds permanent cap {cap}")]
    DimensionCap { n: usize, cap: usize },

    #[error("entry count {len} does not match n² for n = {n}")]
    Shape { n: usize, len: usize },

    #[error("matrices do not share an antidiagonal")]
    AntidiagonalMismatch,

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("sequence must contain at least one element")]
    EmptySequence,

    #[error("malformed range: {0}")]
    MalformedRange(String),

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("every sample is undefined")]
    AllUndefined,
}

pub type Result<T> = std::result::Result<T, Error>;
