use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator {0} for this presentation")]
    UnknownGenerator(String),
    #[error("q must be a unit; cannot specialize at q = 0")]
    ZeroParameter,
    #[error("invalid size: m = {m}, n = {n}")]
    InvalidSize { m: usize, n: usize },
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("invalid view: {0}")]
    InvalidView(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("post-condition failed: {0}")]
    PostCondition(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
