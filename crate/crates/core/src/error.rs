use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: domain has dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    #[error("point {0:?} is not strictly inside the domain")]
    OutsideDomain(Vec<(f64, f64)>),

    #[error("kernel denominator {0:e} is below the near-singularity threshold")]
    NearSingular(f64),

    #[error("integrand returned a non-finite value at {0:?}")]
    NonFinite(Vec<(f64, f64)>),

    #[error("invalid quadrature specification: {0}")]
    InvalidQuadrature(String),

    #[error("cannot add exact scalars with pi powers {0} and {1}")]
    PiPowerMismatch(i32, i32),

    #[error("composition degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
