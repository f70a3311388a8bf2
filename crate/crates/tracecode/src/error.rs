use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A randomized construction ran out of attempts.
    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    /// A decoder could not produce a codeword within its budget.
    #[error("decode failure: {0}")]
    DecodeFailure(String),

    /// Serialized data did not match the expected format or invariants.
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
