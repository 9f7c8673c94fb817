use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("field direction is undefined at the vortex center {point:?}")]
    SingularPoint { point: [f64; 2] },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series truncation failed: {0}")]
    Truncation(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("simulation aborted: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
