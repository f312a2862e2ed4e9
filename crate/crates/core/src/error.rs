use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension m = {m} is not admissible for {family}; admissible: {admissible}")]
    InadmissibleDimension {
        family: String,
        m: u32,
        admissible: &'static str,
    },

    #[error("unknown space family `{0}`")]
    UnknownFamily(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("functions live on different spaces")]
    SpaceMismatch,

    #[error("eigenvalue solver failed to converge for order {order}")]
    EigenSolve { order: usize },

    #[error("cosine reconstruction residual {residual:e} exceeds tolerance {tolerance:e} (degree {degree})")]
    ReconstructionResidual {
        degree: u64,
        residual: f64,
        tolerance: f64,
    },

    #[error("truncation K = {available} too short; need at least {required}")]
    TruncationTooShort { required: usize, available: usize },

    #[error("index {index} out of range (available {available})")]
    OutOfRange { index: u64, available: u64 },

    #[error("kernel fails validation: {0}")]
    InvalidKernel(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
