use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("divergent value: {0}")]
    Divergence(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("ill-conditioned separation (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("finite-difference step too small: {0}")]
    StepUnderflow(String),
}

impl Error {
    /// True for errors caused by the caller's parameters rather than by the
    /// numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
