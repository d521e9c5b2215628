use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum LmpeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("logarithm of zero")]
    LogOfZero,

    #[error("invalid symbol {values:?} for resolution {k}")]
    InvalidSymbol { values: Vec<i64>, k: u32 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("decoding failed: {0}")]
    DecodeFailure(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LmpeError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LmpeError::InvalidParameter(msg.into()))
}
