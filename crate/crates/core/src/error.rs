use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum BnsError {
    /// Parameter or argument fails a domain restriction.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Model/maturity pair violates the admissibility conditions.
    #[error("admissibility violated: {0}")]
    Admissibility(String),

    /// `1 - θ ≤ 0` encountered while weighting a path; the parameter/path
    /// combination cannot carry a positive measure density.
    #[error("density positivity violated on path {path}: 1 - theta = {one_minus_theta}")]
    DensityPositivity { path: usize, one_minus_theta: f64 },

    /// Malformed text input (direction tables, datasets, model files).
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// Bad run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Non-finite value where a finite one is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BnsError>;

impl BnsError {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        BnsError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, BnsError::Io(_))
    }
}
