use std::fmt;
use std::io;

use qgas_core::Error as CoreError;

/// Failure of a subcommand, carrying its process exit status.
#[derive(Debug)]
pub enum CliError {
    /// An oracle residual exceeded its bound.
    Oracle(String),
    /// Invalid configuration, flags, or a precondition the input violates.
    Config(String),
    /// A solver did not reach its residual bound; partial output was written.
    Convergence(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Oracle(msg) => write!(f, "oracle failure: {msg}"),
            CliError::Config(msg) => f.write_str(msg),
            CliError::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Convergence { .. } => CliError::Convergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
