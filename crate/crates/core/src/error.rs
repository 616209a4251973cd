use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown source {0:?}")]
    UnknownSource(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("directed cycle through links {0:?}")]
    Cycle(Vec<String>),
    #[error("ground set of {size} elements exceeds the cap of {cap}")]
    GroundTooLarge { size: usize, cap: usize },
    #[error("ground set does not match the problem: {0}")]
    GroundMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("distribution is not quasi-uniform")]
    NotQuasiUniform,
    #[error("code failed verification: {0}")]
    Unverified(String),
    #[error("label {0:?} collides with a generated label")]
    NameCollision(String),
    #[error("search or pivot budget exhausted")]
    BudgetExhausted,
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
