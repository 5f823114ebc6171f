use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite or mismatched operator entry at ({row}, {col}): {reason}")]
    Assembly { row: usize, col: usize, reason: String },

    #[error("eigensolver did not converge; residual off-diagonal norm {off_diagonal_norm:e}")]
    NoConvergence { off_diagonal_norm: f64 },

    #[error("quadrature did not reach tolerance {requested:e}; achieved {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("configuration mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
