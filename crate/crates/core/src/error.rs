use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{what} entry {value} at {position} is outside [0, 1]")]
    OutOfRange {
        what: &'static str,
        position: String,
        value: String,
    },
    #[error("index {index} out of range for order {n}")]
    Index { index: usize, n: usize },
    #[error("selector value outside its domain: {0}")]
    Selector(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
