//! Analytic pulse envelopes.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{ensure_non_negative, ensure_positive, Result};

/// 2 ln(1 + √2): FWHM of sech²(t/T₀) in units of T₀.
const SECH2_FWHM_PER_T0: f64 = 1.762_747_174_039_086;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    Gaussian,
    Sech2,
}

impl PulseShape {
    /// Unit-area envelope with the given FWHM, evaluated at `t` (1/s).
    pub fn unit_profile(self, fwhm: f64, t: f64) -> f64 {
        match self {
            PulseShape::Gaussian => {
                let sigma = gaussian_sigma(fwhm);
                (-0.5 * (t / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            PulseShape::Sech2 => {
                let t0 = fwhm / SECH2_FWHM_PER_T0;
                let s = 1.0 / (t / t0).cosh();
                s * s / (2.0 * t0)
            }
        }
    }

    /// Integral of [`unit_profile`](Self::unit_profile) from −∞ to `t`.
    pub fn cumulative(self, fwhm: f64, t: f64) -> f64 {
        match self {
            PulseShape::Gaussian => 0.5 * (1.0 + erf(t / (gaussian_sigma(fwhm) * std::f64::consts::SQRT_2))),
            PulseShape::Sech2 => 0.5 * (1.0 + (t * SECH2_FWHM_PER_T0 / fwhm).tanh()),
        }
    }

    /// Half-width beyond which the envelope carries less than ~1e-15 of its
    /// area on either side.
    pub fn support_half_width(self, fwhm: f64) -> f64 {
        match self {
            PulseShape::Gaussian => 8.5 * gaussian_sigma(fwhm),
            PulseShape::Sech2 => 18.0 * fwhm / SECH2_FWHM_PER_T0,
        }
    }
}

pub(crate) fn gaussian_sigma(fwhm: f64) -> f64 {
    fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}

/// A pump or signal pulse. Stored in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    /// m
    pub center_wavelength: f64,
    /// Intensity FWHM, s.
    pub fwhm: f64,
    /// J
    pub energy: f64,
    pub shape: PulseShape,
    /// Linear polarization, degrees from horizontal.
    pub polarization_deg: f64,
}

impl Pulse {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("pulse.center_wavelength", self.center_wavelength)?;
        ensure_positive("pulse.fwhm", self.fwhm)?;
        ensure_non_negative("pulse.energy", self.energy)?;
        Ok(())
    }

    /// Instantaneous power, W, with the peak at `t = 0`.
    pub fn power(&self, t: f64) -> f64 {
        self.energy * self.shape.unit_profile(self.fwhm, t)
    }

    pub fn peak_power(&self) -> f64 {
        self.power(0.0)
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = energy;
        self
    }
}

/// Intensity (W/m²) of `pulse` spread uniformly over `area` (m²), at time
/// `t` relative to the pulse peak. ∫ I dt × area equals the pulse energy.
pub fn pulse_intensity(pulse: &Pulse, area: f64, t: f64) -> Result<f64> {
    ensure_positive("area", area)?;
    Ok(pulse.power(t) / area)
}
