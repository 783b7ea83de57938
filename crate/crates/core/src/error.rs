use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("shell covers support dimensions 2 to 4, got {0}")]
    DimensionUnsupported(usize),

    #[error("cover construction failed: {0}")]
    CoverConstructionFailed(String),

    #[error("function value is not finite at {point:?}")]
    NonFiniteValue { point: Vec<f64> },

    #[error("gradient unavailable: {0}")]
    GradientUnavailable(String),

    #[error("insufficient profile: {0}")]
    InsufficientProfile(String),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },
}

impl Error {
    /// True for errors caused by bad user input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidVector(_)
                | Error::InvalidBall(_)
                | Error::InvalidParams(_)
                | Error::NonUnitDirection { .. }
                | Error::DimensionUnsupported(_)
                | Error::Parse { .. }
                | Error::Validation { .. }
        )
    }
}
