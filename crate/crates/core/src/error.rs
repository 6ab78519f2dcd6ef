use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("work cap of {cap} search nodes exceeded")]
    WorkCapExceeded { cap: u64 },

    #[error("gave up after {attempts} attempts: {msg}")]
    RetryCapExceeded { attempts: u32, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
