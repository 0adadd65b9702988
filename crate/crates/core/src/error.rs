use thiserror::Error;

/// Errors raised by constructors and numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} above tolerance {tolerance:e}")]
    QuadratureNotConverged {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error(
        "integrand exceeds declared growth bound at s = {at:e}: |g(s)| = {value:e} > {bound:e}"
    )]
    GrowthBoundViolated { at: f64, value: f64, bound: f64 },

    #[error("jump measure has infinite mass; a positive jump cutoff is required")]
    InfiniteJumpMass,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(&'static str, &'static str),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("bound violated in {region}: integral {value:e} > bound {bound:e}")]
    BoundViolated {
        region: &'static str,
        value: f64,
        bound: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
