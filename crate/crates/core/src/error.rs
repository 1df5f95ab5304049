use thiserror::Error;

use crate::quadrature::QuadratureError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} µm outside valid range [{min_um}, {max_um}] µm")]
    WavelengthOutOfRange {
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("invalid `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error("curve shape: {0}")]
    Shape(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with a domain error unless `value` is finite and `> 0`.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must be finite and >= 0, got {value}")))
    }
}

pub(crate) fn ensure_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must lie in [0, 1], got {value}")))
    }
}
