use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("base ring is not Euclidean: {0}")]
    NotEuclidean(String),
    #[error("algebra is not local: {0}")]
    NotLocal(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

