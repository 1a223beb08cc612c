use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => crate::EXIT_USAGE,
            CliError::Io(_) => crate::EXIT_IO,
            CliError::Internal(_) => crate::EXIT_INTERNAL,
        }
    }
}

// Library errors all stem from rejected inputs.
impl From<ptperm::Error> for CliError {
    fn from(e: ptperm::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(format!("serialization failed: {e}"))
    }
}
