use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable lists differ")]
    VariableMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is off the unit sphere (|p| - 1 = {deviation:e})")]
    OffSphere { deviation: f64 },

    #[error("velocity is not tangent at the base point (<p,v> = {inner:e})")]
    NotTangent { inner: f64 },

    #[error("zero initial velocity")]
    ZeroVelocity,

    #[error("geodesic is not arc-length normalized: |v|^2 - (1 + c^2) = {defect:e}")]
    NotArcLength { defect: f64 },

    #[error("point lies too close to the chart boundary (factor {factor:e})")]
    ChartBoundary { factor: f64 },

    #[error("connection table mismatch at {0}")]
    ConnectionMismatch(String),

    #[error("field violates the endpoint or mean-zero condition: {0}")]
    Inadmissible(String),

    #[error("operation not supported on this space: {0}")]
    WrongSpace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
