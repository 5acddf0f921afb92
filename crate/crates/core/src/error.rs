use thiserror::Error;

use crate::expr::ParseError;

/// Errors raised while building scenes or evaluating fields at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{function} of {value} is outside its domain")]
    Domain { function: &'static str, value: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("metric is singular at this point (|det g| = {det:e})")]
    SingularMetric { det: f64 },

    #[error("Poisson bivector is degenerate at this point (rank {rank} < {dimension})")]
    DegeneratePoisson { rank: usize, dimension: usize },

    #[error("point is excluded from the sample domain")]
    ExcludedPoint,

    #[error("tensor rank mismatch: {0}")]
    RankMismatch(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid Lie algebra presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
