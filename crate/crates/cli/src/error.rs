use acr_core::AcrError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("degenerate dynamics: {0}")]
    Degenerate(AcrError),
    #[error("tolerance failure: {0}")]
    Tolerance(String),
    #[error(transparent)]
    Core(AcrError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Degenerate(_) => 3,
            HarnessError::Tolerance(_) => 4,
            HarnessError::Core(_) | HarnessError::Io(_) => 1,
        }
    }
}

impl From<AcrError> for HarnessError {
    fn from(e: AcrError) -> Self {
        match e {
            AcrError::DegenerateDynamics { .. } => HarnessError::Degenerate(e),
            other => HarnessError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
