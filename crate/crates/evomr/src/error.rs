use std::path::PathBuf;

/// Process exit status for a failed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// At least one relation failed.
    RelationFailure = 1,
    Usage = 2,
    Io = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] evomr_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl HarnessError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            Self::Core(_) | Self::Usage(_) | Self::Pool(_) => ExitStatus::Usage,
            Self::Write { .. } | Self::Read { .. } | Self::Json(_) | Self::Csv(_) => ExitStatus::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
