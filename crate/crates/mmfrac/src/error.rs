//! Error type shared across the crate.

use crate::mixture::ValidationReport;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar argument violated its documented domain.
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    Param {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A mixture specification failed validation.
    #[error("invalid mixture specification: {0}")]
    InvalidSpec(ValidationReport),

    /// Adaptive quadrature ran out of subdivisions before meeting its
    /// tolerance. Carries the best estimate and the residual error bound.
    #[error("{what}: quadrature did not converge (best estimate {best:.17e}, error bound {error_bound:.3e})")]
    Convergence {
        what: &'static str,
        best: f64,
        error_bound: f64,
    },

    /// Circulant embedding produced eigenvalues more negative than the
    /// clamping tolerance allows. The caller should fall back to the dense
    /// factorization path.
    #[error("circulant embedding failed: eigenvalue {min_eigenvalue:.3e} below tolerance {tolerance:.3e}; use the dense method instead")]
    Embedding {
        min_eigenvalue: f64,
        tolerance: f64,
    },

    /// Covariance factorization failed even after ridge escalation.
    #[error("covariance factorization failed after {attempts} ridge attempts")]
    Factorization { attempts: u32 },

    /// A log-log slope fit found a value it cannot take the logarithm of.
    #[error("autocovariance is not positive at t = {t} (value {value:.3e}); cannot fit a log-log slope")]
    NonPositiveInWindow { t: f64, value: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Param {
            name,
            value,
            constraint,
        }
    }
}
