use thiserror::Error;

/// Errors produced by constructors and samplers on invalid input or when a
/// size guard refuses a computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn guard(msg: impl Into<String>) -> Self {
        Error::SizeGuard(msg.into())
    }
}
