use alloc::string::String;

/// Errors raised by contract checks throughout the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("chromosome at index {0} has not been evaluated")]
    MissingFitness(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("replacement expects {expected} children, got {actual}")]
    ChildCount { expected: usize, actual: usize },
    #[error("sample of size {0} is too small, need at least 2 observations")]
    SampleTooSmall(usize),
    #[error("{relation} does not apply to {fitness} with {algorithm}")]
    NotApplicable {
        relation: &'static str,
        fitness: &'static str,
        algorithm: &'static str,
    },
    #[error("unknown relation id `{0}`")]
    UnknownRelation(String),
    #[error("unknown fault id `{0}`")]
    UnknownFault(String),
    #[error("unknown fitness function `{0}`")]
    UnknownFitness(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
