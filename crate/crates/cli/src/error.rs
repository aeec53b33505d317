use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] swipt_core::Error),
}

impl CliError {
    /// 2 for argument errors, 3 for I/O errors.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) | CliError::Core(swipt_core::Error::Io { .. }) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }
}
