use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown guard label `{0}`")]
    UnknownLabel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("DNF expansion exceeds {0} clauses")]
    ClauseExplosion(usize),
    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
