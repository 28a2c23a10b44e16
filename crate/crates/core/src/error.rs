use thiserror::Error;

/// Engine-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("weight `{0}` is not a rational in [0, 1]")]
    Scale(String),

    #[error("vocabulary error: {0}")]
    Vocab(String),

    #[error("bases not normalized: {0}")]
    NotNormalized(String),

    #[error("decision `{0}` is inconsistent with the knowledge base")]
    InfeasibleDecision(String),

    #[error("backend limit exceeded: {0}")]
    BackendLimit(String),

    #[error("enumeration limit exceeded: {0}")]
    EnumerationLimit(String),

    #[error("instance generation exhausted after {0} attempts")]
    GenerationExhausted(usize),

    #[error("unknown decision `{0}`")]
    UnknownDecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
