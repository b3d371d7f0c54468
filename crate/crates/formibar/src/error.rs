use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("unknown element id `{0}`")]
    UnknownElement(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input:\n{0}")]
    Invalid(String),
    #[error("empty interval")]
    EmptyInterval,
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input is not piecewise linear: {0}")]
    NotPiecewiseLinear(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
