use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, ensure_probability, Error, Result};
use crate::optics::pulse::{Pulse, PulseShape};
use crate::optics::sellmeier::{walkoff, SellmeierCoefficients};
use crate::quadrature::QuadratureOptions;

/// Pump energy at which the default calibration places Δφ = π.
pub const REFERENCE_PUMP_ENERGY: f64 = 3.0e-9;

/// Measured switching plateau used as the default imperfection multiplier.
pub const MEASURED_PLATEAU: f64 = 0.967;

/// Kerr medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    /// m
    pub length: f64,
    /// Nonlinear index, m²/W.
    pub n2: f64,
    /// Effective mode area, m².
    pub effective_area: f64,
    pub material: SellmeierCoefficients,
    /// Fixed walk-off (s/m) used instead of the material dispersion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walkoff_override: Option<f64>,
}

impl Default for FiberSpec {
    /// 10 cm of single-mode silica fiber with a 4.5 µm mode-field diameter.
    fn default() -> Self {
        Self {
            length: 0.10,
            n2: 2.7e-20,
            effective_area: mode_field_area(4.5e-6),
            material: SellmeierCoefficients::fused_silica(),
            walkoff_override: None,
        }
    }
}

impl FiberSpec {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("fiber.length", self.length)?;
        ensure_positive("fiber.n2", self.n2)?;
        ensure_positive("fiber.effective_area", self.effective_area)?;
        if let Some(d) = self.walkoff_override {
            if !d.is_finite() {
                return Err(Error::domain("fiber.walkoff_override", "must be finite"));
            }
        }
        Ok(())
    }
}

/// π (MFD/2)², the Gaussian-mode effective area for a mode-field diameter.
pub fn mode_field_area(mode_field_diameter: f64) -> f64 {
    std::f64::consts::PI * (0.5 * mode_field_diameter).powi(2)
}

/// Normalized temporal weight of the signal photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalProfile {
    /// Point-like photon: the total response equals the intrinsic one.
    Delta,
    Pulse { shape: PulseShape, fwhm: f64 },
    /// Gaussian of the given FWHM convolved with a rectangle of the given
    /// width (s), normalized to unit area.
    GaussianRect { gaussian_fwhm: f64, rect_width: f64 },
}

impl Default for SignalProfile {
    /// 100 fs source pump convolved with 380 fs of walk-off in the source fiber.
    fn default() -> Self {
        SignalProfile::GaussianRect {
            gaussian_fwhm: 100e-15,
            rect_width: 380e-15,
        }
    }
}

impl SignalProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SignalProfile::Delta => Ok(()),
            SignalProfile::Pulse { fwhm, .. } => ensure_positive("signal_profile.fwhm", fwhm),
            SignalProfile::GaussianRect {
                gaussian_fwhm,
                rect_width,
            } => {
                ensure_positive("signal_profile.gaussian_fwhm", gaussian_fwhm)?;
                crate::error::ensure_non_negative("signal_profile.rect_width", rect_width)
            }
        }
    }

    /// Weight at time `t` (1/s). Not defined for [`SignalProfile::Delta`],
    /// which returns 0 everywhere.
    pub fn weight(&self, t: f64) -> f64 {
        match *self {
            SignalProfile::Delta => 0.0,
            SignalProfile::Pulse { shape, fwhm } => shape.unit_profile(fwhm, t),
            SignalProfile::GaussianRect {
                gaussian_fwhm,
                rect_width,
            } => {
                let g = PulseShape::Gaussian;
                if rect_width == 0.0 {
                    g.unit_profile(gaussian_fwhm, t)
                } else {
                    let half = 0.5 * rect_width;
                    (g.cumulative(gaussian_fwhm, t + half) - g.cumulative(gaussian_fwhm, t - half)) / rect_width
                }
            }
        }
    }

    /// Interval outside of which the weight is negligible.
    pub fn support(&self) -> (f64, f64) {
        let half = match *self {
            SignalProfile::Delta => 0.0,
            SignalProfile::Pulse { shape, fwhm } => shape.support_half_width(fwhm),
            SignalProfile::GaussianRect {
                gaussian_fwhm,
                rect_width,
            } => 0.5 * rect_width + PulseShape::Gaussian.support_half_width(gaussian_fwhm),
        };
        (-half, half)
    }

    /// Shortest time scale of the weight, used to size quadrature panels.
    pub(crate) fn feature_width(&self) -> f64 {
        match *self {
            SignalProfile::Delta => f64::INFINITY,
            SignalProfile::Pulse { fwhm, .. } => fwhm,
            SignalProfile::GaussianRect { gaussian_fwhm, .. } => gaussian_fwhm,
        }
    }
}

/// Complete shutter scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShutterConfig {
    pub fiber: FiberSpec,
    pub pump: Pulse,
    /// m
    pub signal_wavelength: f64,
    pub signal_profile: SignalProfile,
    /// Angle between pump and signal polarizations, degrees in [0, 90].
    pub theta_deg: f64,
    /// Multiplier on n2. `None` means the bare fiber value.
    #[serde(default)]
    pub calibration: Option<f64>,
    /// Multiplies every efficiency; 1.0 is the ideal shutter.
    pub imperfection: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for ShutterConfig {
    fn default() -> Self {
        Self {
            fiber: FiberSpec::default(),
            pump: Pulse {
                center_wavelength: 800e-9,
                fwhm: 410e-15,
                energy: REFERENCE_PUMP_ENERGY,
                shape: PulseShape::Gaussian,
                polarization_deg: 0.0,
            },
            signal_wavelength: 685e-9,
            signal_profile: SignalProfile::default(),
            theta_deg: 45.0,
            calibration: None,
            imperfection: MEASURED_PLATEAU,
            quadrature: QuadratureOptions::default(),
        }
    }
}

impl ShutterConfig {
    pub fn validate(&self) -> Result<()> {
        self.fiber.validate()?;
        self.pump.validate()?;
        self.signal_profile.validate()?;
        ensure_positive("signal_wavelength", self.signal_wavelength)?;
        if !(0.0..=90.0).contains(&self.theta_deg) {
            return Err(Error::domain(
                "theta_deg",
                format!("must lie in [0, 90], got {}", self.theta_deg),
            ));
        }
        if let Some(c) = self.calibration {
            ensure_positive("calibration", c)?;
        }
        ensure_probability("imperfection", self.imperfection)?;
        ensure_positive("quadrature.rel_tol", self.quadrature.rel_tol)?;
        if self.quadrature.panels == 0 {
            return Err(Error::domain("quadrature.panels", "must be at least 1"));
        }
        Ok(())
    }

    /// Pump–signal walk-off per unit length, s/m (see
    /// [`walkoff`](crate::optics::sellmeier::walkoff) for the sign).
    pub fn walkoff(&self) -> Result<f64> {
        match self.fiber.walkoff_override {
            Some(d) => Ok(d),
            None => walkoff(&self.fiber.material, self.pump.center_wavelength, self.signal_wavelength),
        }
    }

    /// Total walk-off accumulated over the fiber, s (signed).
    pub fn total_walkoff(&self) -> Result<f64> {
        Ok(self.walkoff()? * self.fiber.length)
    }

    pub fn n2_scale(&self) -> f64 {
        self.calibration.unwrap_or(1.0)
    }

    /// Ideal shutter (imperfection multiplier 1).
    pub fn ideal(mut self) -> Self {
        self.imperfection = 1.0;
        self
    }

    pub fn with_pump_energy(mut self, energy: f64) -> Self {
        self.pump.energy = energy;
        self
    }

    /// Fixes the n2 multiplier so that Δφ(τ = 0) equals `target_phase` at
    /// `reference_energy`. The pump energy itself is left unchanged.
    pub fn calibrated(mut self, reference_energy: f64, target_phase: f64) -> Result<Self> {
        ensure_positive("calibration reference energy", reference_energy)?;
        ensure_positive("calibration target phase", target_phase)?;
        let mut probe = self.clone().with_pump_energy(reference_energy);
        probe.calibration = None;
        let raw = super::phase::nonlinear_phase(&probe, 0.0)?;
        if !(raw > 0.0) {
            return Err(Error::domain(
                "calibration",
                "no phase accumulates at zero delay; cannot calibrate",
            ));
        }
        self.calibration = Some(target_phase / raw);
        Ok(self)
    }

    /// Rotation efficiency for a given phase, including the imperfection
    /// multiplier.
    pub fn efficiency(&self, phase: f64) -> f64 {
        self.imperfection * super::phase::switching_efficiency(self.theta_deg, phase)
    }
}
