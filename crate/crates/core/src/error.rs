use thiserror::Error;

/// Errors reported by the geometry, quadrature and inversion routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("point violates the model constraint: {0}")]
    InvalidPoint(String),

    #[error("invalid geodesic submanifold: {0}")]
    InvalidGeodesic(String),

    #[error("parameter `{param}` = {value} is outside its domain: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("parity mismatch: {0}")]
    Parity(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("integrand is not integrable: tail estimate {tail:e} exceeds {limit:e}")]
    NotIntegrable { tail: f64, limit: f64 },

    #[error("rank-deficient least-squares design: {0}")]
    RankDeficient(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("unknown phantom `{0}`")]
    UnknownPhantom(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<S: num_traits::ToPrimitive>(
    param: &'static str,
    value: S,
    reason: &'static str,
) -> Error {
    Error::Domain {
        param,
        value: value.to_f64().unwrap_or(f64::NAN),
        reason,
    }
}
