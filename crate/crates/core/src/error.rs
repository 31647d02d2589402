use thiserror::Error;

/// Errors raised while constructing or combining operators and states.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("zero vector cannot be compared up to a phase")]
    ZeroVector,

    #[error("frame is not orthonormal (max deviation {deviation:e}, tolerance {tolerance:e})")]
    NotOrthonormal { deviation: f64, tolerance: f64 },

    #[error("frame has {count} vectors, expected {dim}")]
    IncompleteFrame { count: usize, dim: usize },

    #[error("eigenvalue count {count} does not match frame size {dim}")]
    EigenvalueCount { count: usize, dim: usize },

    #[error("tolerance must be strictly positive, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid deformation profile: {0}")]
    InvalidProfile(String),

    #[error("deformation profile vanishes at level {level}; inverse square root undefined")]
    SingularProfile { level: usize },

    #[error("angular frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("invalid state file: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
