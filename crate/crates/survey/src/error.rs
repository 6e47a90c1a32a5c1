use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error(transparent)]
    Core(#[from] euclid_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Precondition(String),
}

impl SurveyError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SurveyError::Io { path: path.into(), source }
    }

    /// Process exit code: 2 for precondition failures, 3 for failed
    /// verification, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SurveyError::Core(_) | SurveyError::Precondition(_) => 2,
            SurveyError::Verification(_) => 3,
            SurveyError::Io { .. } => 1,
        }
    }
}

pub type SurveyResult<T> = std::result::Result<T, SurveyError>;
