use thiserror::Error;

/// Errors raised while building or evaluating mixtures, models and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixture has no components")]
    EmptyMixture,

    #[error("component {index}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("component {index}: non-finite entry")]
    NonFinite { index: usize },

    #[error("component {index}: negative weight {weight}")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("weights sum {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("component {index}: covariance not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { index: usize, asymmetry: f64 },

    #[error("component {index}: covariance not positive definite")]
    NotPositiveDefinite { index: usize },

    #[error("{what}: expected dimension {expected}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("observation covariance of component pair ({k},{l}) not positive definite")]
    ObservationCovariance { k: usize, l: usize },

    #[error("innovation covariance H Cxx H^T + Cnn is singular")]
    SingularInnovation,

    #[error("noise second moment is zero")]
    ZeroNoisePower,

    #[error("target SNR must be finite, got {0}")]
    NonFiniteSnr(f64),

    #[error("index range {start}..{end} out of bounds for dimension {dim}")]
    RangeOutOfBounds { start: usize, end: usize, dim: usize },

    #[error("y = {y} outside numerical support of the quadrature grid")]
    OutsideSupport { y: f64 },

    #[error("model is not one-dimensional (d = {d}, m = {m})")]
    NotScalarModel { d: usize, m: usize },

    #[error("invalid quadrature spec: {0}")]
    Quadrature(&'static str),

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
