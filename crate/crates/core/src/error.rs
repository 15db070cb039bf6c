//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order s = {0} outside the admissible range ({1}, {2})")]
    OrderOutOfRange(f64, f64, f64),

    #[error("grid spacing h = {h} too coarse for feature size {feature} (need h <= feature/8)")]
    FeatureTooFine { h: f64, feature: f64 },

    #[error("invalid shape specification: {0}")]
    InvalidSpec(String),

    #[error("domain mask is empty")]
    EmptyDomain,

    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),

    #[error("no admissible nodes: domain too thin for grid spacing h = {0}")]
    EmptyNodeSet(f64),

    #[error("point ({0}, {1}) is not strictly inside the occupied region")]
    PointOutsideDomain(f64, f64),

    #[error("quadrature tolerance not met after maximum subdivisions")]
    ToleranceNotMet,

    #[error("eigensolver failed to converge after {0} iterations")]
    NoConvergence(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("period must be positive, got {0}")]
    NonpositivePeriod(f64),

    #[error("function does not vanish at theta0 = {theta0}: |w(theta0)| = {value:.3e} exceeds {bound:.3e}")]
    HypothesisViolation { theta0: f64, value: f64, bound: f64 },

    #[error("Kelvin inversion undefined at the origin")]
    OriginError,

    #[error("extension radius must exceed 1, got {0}")]
    RadiusTooSmall(f64),

    #[error("subset E has zero measure")]
    ZeroMeasureSubset,

    #[error("seminorm is zero; ratio undefined")]
    ZeroSeminorm,

    #[error("eigenvalue must be positive, got {0}")]
    NonpositiveEigenvalue(f64),

    #[error("user-supplied mode requires a value for the dimensional constant")]
    MissingDimensionalConstant,

    #[error("counterexample squares need k >= 2, got {0}")]
    KTooSmall(usize),

    #[error("shape is not simply connected; experiment requires it")]
    NotSimplyConnected,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
