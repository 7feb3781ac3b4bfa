use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("graph too large for exhaustive enumeration: n = {n}, cap = {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("search exceeded its node budget of {budget}")]
    ResourceLimit { budget: u64 },
    #[error("graph is not admissible: {0}")]
    NotAdmissible(String),
    #[error("vertex count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("corrupt payload: {0}")]
    CorruptPayload(String),
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
