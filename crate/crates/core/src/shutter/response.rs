//! Delay and pump-energy response curves.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ShutterConfig, SignalProfile};
use super::phase::nonlinear_phase;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, QuadratureOptions};

/// Efficiency sampled on a delay grid (s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseCurve {
    pub delays: Vec<f64>,
    pub efficiency: Vec<f64>,
    pub config: ShutterConfig,
}

impl ResponseCurve {
    pub fn fwhm(&self) -> Result<f64> {
        fwhm(&self.delays, &self.efficiency)
    }

    pub fn peak(&self) -> f64 {
        self.efficiency.iter().copied().fold(0.0, f64::max)
    }
}

/// Efficiency against pump energy at a fixed delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyScan {
    /// J
    pub energies: Vec<f64>,
    /// rad
    pub phase: Vec<f64>,
    pub efficiency: Vec<f64>,
    /// Phase per unit pump energy, rad/J.
    pub kappa: f64,
    /// s
    pub delay: f64,
}

fn check_increasing(name: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(name, "values must be finite"));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(name, "values must be strictly increasing"));
    }
    Ok(())
}

/// η(τ) for a point-like signal: the imperfection multiplier times
/// sin²(2θ) sin²(Δφ(τ)/2).
pub fn intrinsic_response(config: &ShutterConfig, delays: &[f64]) -> Result<ResponseCurve> {
    config.validate()?;
    check_increasing("delays", delays)?;
    let efficiency = delays
        .par_iter()
        .map(|&d| Ok(config.efficiency(nonlinear_phase(config, d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResponseCurve {
        delays: delays.to_vec(),
        efficiency,
        config: config.clone(),
    })
}

/// Intrinsic response averaged over the signal photon's temporal weight:
/// η_tot(τ) = ∫ η_int(τ − t) w(t) dt.
pub fn total_response(config: &ShutterConfig, delays: &[f64]) -> Result<ResponseCurve> {
    config.validate()?;
    check_increasing("delays", delays)?;
    if config.signal_profile == SignalProfile::Delta {
        return intrinsic_response(config, delays);
    }
    let efficiency = delays
        .par_iter()
        .map(|&d| weighted_efficiency(config, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResponseCurve {
        delays: delays.to_vec(),
        efficiency,
        config: config.clone(),
    })
}

fn weighted_efficiency(config: &ShutterConfig, delay: f64) -> Result<f64> {
    let profile = config.signal_profile;
    let (lo, hi) = profile.support();
    let feature = profile.feature_width().min(config.pump.fwhm);
    let panels = ((8.0 * (hi - lo) / feature).ceil() as usize).clamp(8, 4096);
    // The integrand carries the inner quadrature's error, so the outer
    // tolerance stays well above it.
    let opts = QuadratureOptions {
        rel_tol: (config.quadrature.rel_tol * 100.0).max(1e-9),
        abs_tol: 1e-13,
        panels,
        ..config.quadrature
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |t: f64| {
        let w = profile.weight(t);
        if w == 0.0 {
            return 0.0;
        }
        match nonlinear_phase(config, delay - t) {
            Ok(phase) => config.efficiency(phase) * w,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let r = adaptive_simpson(integrand, lo, hi, &opts)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r.value.clamp(0.0, 1.0))
}

/// Efficiency against pump energy at fixed `delay`, evaluated at the signal
/// centre. Because the phase is linear in pump energy the curve is
/// imperfection · sin²(2θ) sin²(κE/2); κ is reported alongside.
pub fn energy_scan(config: &ShutterConfig, energies: &[f64], delay: f64) -> Result<EnergyScan> {
    config.validate()?;
    check_increasing("energies", energies)?;
    if energies.first().is_some_and(|&e| e < 0.0) {
        return Err(Error::domain("energies", "must be non-negative"));
    }
    const UNIT: f64 = 1e-9;
    let kappa = nonlinear_phase(&config.clone().with_pump_energy(UNIT), delay)? / UNIT;
    let phase = energies
        .par_iter()
        .map(|&e| nonlinear_phase(&config.clone().with_pump_energy(e), delay))
        .collect::<Result<Vec<_>>>()?;
    let efficiency = phase.iter().map(|&p| config.efficiency(p)).collect();
    Ok(EnergyScan {
        energies: energies.to_vec(),
        phase,
        efficiency,
        kappa,
        delay,
    })
}

/// Full width at half maximum of a sampled curve, with linear
/// interpolation of both half-maximum crossings.
pub fn fwhm(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Shape("need at least three (x, y) samples".into()));
    }
    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, y)| if *y > *acc.1 { (i, y) } else { acc });
    if !(ymax > 0.0) {
        return Err(Error::Shape("curve has no positive maximum".into()));
    }
    let half = 0.5 * ymax;
    let crossing = |i: usize, j: usize| xs[i] + (half - ys[i]) / (ys[j] - ys[i]) * (xs[j] - xs[i]);

    let left = (0..imax)
        .rev()
        .find(|&i| ys[i] < half)
        .ok_or_else(|| Error::Shape("curve never falls below half maximum on the left".into()))?;
    let right = (imax + 1..ys.len())
        .find(|&i| ys[i] < half)
        .ok_or_else(|| Error::Shape("curve never falls below half maximum on the right".into()))?;
    if ys[..left].iter().chain(&ys[right + 1..]).any(|&y| y >= half) {
        return Err(Error::Shape("more than one region above half maximum".into()));
    }
    Ok(crossing(right - 1, right) - crossing(left, left + 1))
}
