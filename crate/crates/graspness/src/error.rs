use std::path::Path;

pub type Result<T> = std::result::Result<T, CliError>;

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input file, configuration or argument (exit code 2).
    #[error("{0}")]
    Input(String),
    /// A computed result broke one of its own invariants (exit code 3).
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

// Library errors are contract violations by the caller's inputs.
impl From<graspness_core::Error> for CliError {
    fn from(e: graspness_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub(crate) fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}
