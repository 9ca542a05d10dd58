use thiserror::Error;

use crate::forms::GaussianState;

/// Errors raised anywhere in the tomography pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quadratic form is not negative definite (largest eigenvalue {max_eigenvalue:e})")]
    NotNormalizable { max_eigenvalue: f64 },

    #[error("Q-function covariance is singular (smallest eigenvalue {min_eigenvalue:e})")]
    SingularCovariance { min_eigenvalue: f64 },

    /// The recovered state violates the uncertainty relation. The state is
    /// still returned so callers working with noisy data can decide.
    #[error("recovered covariance violates the uncertainty relation (min eigenvalue {min_eigenvalue:e})")]
    NonPhysical {
        state: Box<GaussianState>,
        min_eigenvalue: f64,
    },

    #[error("mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock cutoff too small: estimated truncation error {leakage:e}")]
    CutoffTooSmall { leakage: f64 },

    #[error("heterodyne sampling needs a normalized state (log weight {log_weight})")]
    UnnormalizedState { log_weight: f64 },

    #[error("too few samples: have {have}, need at least {need}")]
    TooFewSamples { have: usize, need: usize },

    #[error("sample covariance is degenerate")]
    DegenerateCovariance,

    #[error("probe set gives a singular K system (condition number {cond:e})")]
    SingularK { cond: f64 },

    #[error("probe set gives a singular J system (condition number {cond:e})")]
    SingularJ { cond: f64 },

    #[error("conjugate pair recovered inconsistently (deviation {deviation:e})")]
    ConjugateInconsistency { deviation: f64 },

    #[error("output quadratic parts differ across records (deviation {deviation:e} > {tolerance:e})")]
    InconsistentQuadraticPart { deviation: f64, tolerance: f64 },

    #[error("Gaussian integral diverges: real part of the quadratic block is not negative definite")]
    DivergentIntegral,

    #[error("wrong number of probes: expected {expected}, found {found}")]
    ProbeCount { expected: usize, found: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for data/validation problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::NotNormalizable { .. }
            | Error::SingularCovariance { .. }
            | Error::CutoffTooSmall { .. }
            | Error::DegenerateCovariance
            | Error::SingularK { .. }
            | Error::SingularJ { .. }
            | Error::ConjugateInconsistency { .. }
            | Error::DivergentIntegral => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
