//! Cross-phase modulation accumulated while the pump walks through the
//! signal, and the polarization rotation it produces.
//!
//! Delays are expressed in the signal's reduced-time frame. `delay` is the
//! offset of the pump peak from the signal centre when both are at the
//! fiber midpoint; positive means the pump lags. At position z the pump
//! peak sits at `delay + d_w (z − L/2)`, so the signal centre sees
//!
//! Δφ(delay) = (2π n₂ / λ_s) ∫₀ᴸ I_p(−delay − d_w (z − L/2)) dz.

use std::f64::consts::PI;

use super::config::ShutterConfig;
use crate::error::{Error, Result};
use crate::optics::jones::{JonesMatrix, JonesVector};
use crate::quadrature::{adaptive_simpson, Integral};

const MAX_PANELS: usize = 20_000;

/// Nonlinear phase (rad) imprinted on the signal centre for the given pump
/// delay (s).
pub fn nonlinear_phase(config: &ShutterConfig, delay: f64) -> Result<f64> {
    Ok(nonlinear_phase_integral(config, delay)?.value)
}

/// As [`nonlinear_phase`], returning the quadrature diagnostics as well.
/// `value` and `error_estimate` are in radians.
pub fn nonlinear_phase_integral(config: &ShutterConfig, delay: f64) -> Result<Integral> {
    if !delay.is_finite() {
        return Err(Error::domain("delay", "must be finite"));
    }
    let fiber = &config.fiber;
    let area = fiber.effective_area;
    let d_w = config.walkoff()?;
    let length = fiber.length;
    let pump = &config.pump;

    // Initial panels resolve the pump envelope as it sweeps along z.
    let sweep = (d_w * length).abs();
    let panels = ((8.0 * sweep / pump.fwhm).ceil() as usize).clamp(4, MAX_PANELS);
    let opts = config.quadrature.with_panels(panels);

    let integrand = |z: f64| pump.power(-delay - d_w * (z - 0.5 * length)) / area;
    let r = adaptive_simpson(integrand, 0.0, length, &opts)?;

    let prefactor = 2.0 * PI * fiber.n2 * config.n2_scale() / config.signal_wavelength;
    Ok(Integral {
        value: prefactor * r.value,
        error_estimate: prefactor * r.error_estimate,
        evaluations: r.evaluations,
    })
}

/// Phase reached once the pump has completely swept through the signal:
/// the z-integral becomes the pump fluence divided by |d_w|.
pub fn full_sweep_phase(config: &ShutterConfig) -> Result<f64> {
    let d_w = config.walkoff()?;
    if d_w == 0.0 {
        return Err(Error::domain("walkoff", "no sweep without walk-off"));
    }
    let fiber = &config.fiber;
    Ok(2.0 * PI * fiber.n2 * config.n2_scale() * config.pump.energy
        / (config.signal_wavelength * fiber.effective_area * d_w.abs()))
}

/// η = sin²(2θ) sin²(Δφ/2) for an ideal Kerr shutter between crossed
/// polarizers.
pub fn switching_efficiency(theta_deg: f64, phase: f64) -> f64 {
    let t = (2.0 * theta_deg.to_radians()).sin();
    let p = (0.5 * phase).sin();
    t * t * p * p
}

/// Pump-induced birefringence as a retarder of retardance `phase` with its
/// axis along the pump polarization.
pub fn kerr_jones_matrix(phase: f64, pump_angle_deg: f64) -> JonesMatrix {
    JonesMatrix::retarder(pump_angle_deg, phase)
}

/// Probability that a signal polarized at `pump_angle_deg − theta_deg`
/// exits through the analyzer port orthogonal to its input polarization.
pub fn jones_switching_probability(theta_deg: f64, phase: f64, pump_angle_deg: f64) -> f64 {
    let signal_angle = pump_angle_deg - theta_deg;
    let out = kerr_jones_matrix(phase, pump_angle_deg).apply(&JonesVector::linear(signal_angle));
    out.projection_probability(&JonesVector::linear(signal_angle + 90.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shutter::config::REFERENCE_PUMP_ENERGY;

    fn long_fiber() -> ShutterConfig {
        let mut c = ShutterConfig::default();
        c.fiber.length = 0.5;
        c
    }

    #[test]
    fn efficiency_corners() {
        assert!((switching_efficiency(45.0, PI) - 1.0).abs() < 1e-15);
        assert!((switching_efficiency(45.0, PI / 2.0) - 0.5).abs() < 1e-15);
        for th in [0.0, 10.0, 45.0, 80.0, 90.0] {
            assert_eq!(switching_efficiency(th, 0.0), 0.0);
        }
    }

    #[test]
    fn jones_half_wave_case() {
        assert!((jones_switching_probability(45.0, PI, 0.0) - 1.0).abs() < 1e-15);
        let j = kerr_jones_matrix(0.0, 30.0);
        assert!((j.0 - nalgebra::Matrix2::identity()).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn zero_energy_gives_zero_phase() {
        let c = ShutterConfig::default().with_pump_energy(0.0);
        assert_eq!(nonlinear_phase(&c, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn no_overlap_gives_negligible_phase() {
        let c = ShutterConfig::default();
        let far = 20.0 * (c.pump.fwhm + c.total_walkoff().unwrap().abs());
        assert!(nonlinear_phase(&c, far).unwrap() < 1e-6);
        assert!(nonlinear_phase(&c, -far).unwrap() < 1e-6);
    }

    #[test]
    fn matches_full_sweep_closed_form() {
        let c = long_fiber();
        let q = nonlinear_phase(&c, 0.0).unwrap();
        let a = full_sweep_phase(&c).unwrap();
        assert!(((q - a) / a).abs() < 1e-6, "{q} vs {a}");
    }

    #[test]
    fn step_halving_changes_phase_below_tolerance() {
        let c = ShutterConfig::default();
        for delay in [-1.2e-12, -0.5e-12, 0.0, 0.7e-12] {
            let base = nonlinear_phase_integral(&c, delay).unwrap();
            let mut finer = c.clone();
            finer.quadrature.rel_tol *= 1e-2;
            let fine = nonlinear_phase_integral(&finer, delay).unwrap();
            assert!(((base.value - fine.value) / fine.value).abs() < 1e-6);
        }
    }

    #[test]
    fn calibration_hits_pi() {
        let c = ShutterConfig::default().calibrated(REFERENCE_PUMP_ENERGY, PI).unwrap();
        assert!((nonlinear_phase(&c, 0.0).unwrap() - PI).abs() < 1e-9);
        // default fiber parameters are within ~10% of the calibrated phase
        assert!((c.calibration.unwrap() - 1.0).abs() < 0.15);
    }

    #[test]
    fn zero_walkoff_is_constant_in_z() {
        let mut c = ShutterConfig::default();
        c.fiber.walkoff_override = Some(0.0);
        let q = nonlinear_phase(&c, 0.0).unwrap();
        let expected = 2.0 * PI * c.fiber.n2 * c.pump.peak_power() * c.fiber.length
            / (c.signal_wavelength * c.fiber.effective_area);
        assert!(((q - expected) / expected).abs() < 1e-12);
        assert!(full_sweep_phase(&c).is_err());
    }

    #[test]
    fn rejects_non_finite_delay() {
        assert!(nonlinear_phase(&ShutterConfig::default(), f64::NAN).is_err());
    }
}
