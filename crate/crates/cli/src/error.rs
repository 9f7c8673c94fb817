use std::fmt;

use topogauge_core::Error as CoreError;

/// Failure classes of a CLI invocation, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit 2).
    Config(String),
    /// A numerical routine did not converge (exit 3).
    NonConvergence(String),
    /// An experiment or check failed (exit 1).
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Failure(_) => 1,
            Self::Config(_) => 2,
            Self::NonConvergence(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::NonConvergence(m) => write!(f, "non-convergence: {m}"),
            Self::Failure(m) => write!(f, "failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. } | CoreError::SingularPoint { .. } => Self::Config(e.to_string()),
            CoreError::NonConvergence(_) | CoreError::Truncation(_) => Self::NonConvergence(e.to_string()),
            _ => Self::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Failure(format!("i/o: {e}"))
    }
}
