use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("enumeration exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("operation requires an abelian group")]
    NotAbelian,

    #[error("multiset is not symmetric")]
    NotSymmetric,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("measured bias {measured} exceeds target {target}")]
    BiasTooHigh { measured: f64, target: f64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    #[error("no element of the space avoids every cover member")]
    NoHit,

    #[error("pessimistic estimator starts at {phi0}, which is not below 1")]
    EstimatorStuck { phi0: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
