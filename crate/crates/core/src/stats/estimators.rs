//! Estimators built from raw counts. Uncertainties are first-order
//! propagation of independent Poisson errors (σ_N = √N) on every count.

use serde::{Deserialize, Serialize};

use super::counts::CountsSummary;
use crate::error::{Error, Result};

/// 95% upper limit on a Poisson mean when zero events were observed.
const ZERO_COUNT_UPPER_LIMIT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Heralded g²(0) = P₁₂ᵢ / (P₁ᵢ P₂ᵢ) with the probabilities taken per
/// herald, i.e. N₁₂ᵢ Nᵢ / (N₁ᵢ N₂ᵢ).
///
/// With no three-fold events the error is the one-count resolution
/// Nᵢ / (N₁ᵢ N₂ᵢ).
pub fn heralded_g2(counts: &CountsSummary) -> Result<G2Estimate> {
    let (n12, ni, n1, n2) = (
        counts.three_fold_12i as f64,
        counts.idler_clicks as f64,
        counts.two_fold_1i as f64,
        counts.two_fold_2i as f64,
    );
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::InsufficientStatistics(format!(
            "two-fold coincidences are zero (1i: {}, 2i: {})",
            counts.two_fold_1i, counts.two_fold_2i
        )));
    }
    let value = n12 * ni / (n1 * n2);
    let std_error = if n12 > 0.0 {
        value * (1.0 / n12 + 1.0 / ni + 1.0 / n1 + 1.0 / n2).sqrt()
    } else {
        ni / (n1 * n2)
    };
    Ok(G2Estimate { value, std_error })
}

/// g² of an incoherent mixture of signal and noise photons with heralded
/// rates `signal_rate` and `noise_rate`:
///
/// (N_s² g_s + 2 N_s N_n + N_n² g_n) / (N_s + N_n)²
///
/// Returns `g2_input` exactly when the noise rate is zero and `g2_noise`
/// exactly when the signal rate is zero.
pub fn expected_g2_mixture(signal_rate: f64, noise_rate: f64, g2_input: f64, g2_noise: f64) -> Result<f64> {
    if !(signal_rate >= 0.0 && noise_rate >= 0.0) {
        return Err(Error::domain("mixture rates", "must be non-negative"));
    }
    let total = signal_rate + noise_rate;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::domain("mixture rates", "signal and noise rates are both zero"));
    }
    let fs = signal_rate / total;
    let fn_ = noise_rate / total;
    Ok(fs * fs * g2_input + 2.0 * fs * fn_ + fn_ * fn_ * g2_noise)
}

/// Raw counts behind an efficiency estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyCounts {
    /// Switched or anti-switched counts, depending on the estimate.
    pub port: u64,
    pub noise: u64,
    pub input: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyEstimate {
    pub value: f64,
    pub std_error: f64,
    pub counts: EfficiencyCounts,
}

/// (N_port − N_noise) / N_input and its Poisson error.
fn transmitted_fraction(port: u64, noise: u64, input: u64) -> Result<(f64, f64)> {
    if input == 0 {
        return Err(Error::domain("N_input", "must be positive"));
    }
    let (p, n, i) = (port as f64, noise as f64, input as f64);
    let f = (p - n) / i;
    Ok((f, ((p + n) / (i * i) + f * f / i).sqrt()))
}

/// η_switch = (N_switch − N_noise) / N_input.
pub fn switching_efficiency_estimate(switched: u64, noise: u64, input: u64) -> Result<EfficiencyEstimate> {
    let (value, std_error) = transmitted_fraction(switched, noise, input)?;
    Ok(EfficiencyEstimate {
        value,
        std_error,
        counts: EfficiencyCounts {
            port: switched,
            noise,
            input,
        },
    })
}

/// η_anti-switch = 1 − (N_anti − N_noise) / N_input.
pub fn anti_switching_efficiency_estimate(anti_switched: u64, noise: u64, input: u64) -> Result<EfficiencyEstimate> {
    let (f, std_error) = transmitted_fraction(anti_switched, noise, input)?;
    Ok(EfficiencyEstimate {
        value: 1.0 - f,
        std_error,
        counts: EfficiencyCounts {
            port: anti_switched,
            noise,
            input,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnrEstimate {
    Ratio { value: f64, std_error: f64 },
    /// No noise counts observed: N_switch over the 95% upper limit on the
    /// noise mean.
    LowerBound { value: f64 },
}

impl SnrEstimate {
    pub fn value(&self) -> f64 {
        match *self {
            SnrEstimate::Ratio { value, .. } | SnrEstimate::LowerBound { value } => value,
        }
    }
}

/// N_switch / N_noise.
pub fn snr(switched: u64, noise: u64) -> SnrEstimate {
    let s = switched as f64;
    if noise == 0 {
        return SnrEstimate::LowerBound {
            value: s / ZERO_COUNT_UPPER_LIMIT,
        };
    }
    let n = noise as f64;
    SnrEstimate::Ratio {
        value: s / n,
        std_error: (s / (n * n) + s * s / (n * n * n)).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g2_of_ideal_single_photons_is_zero() {
        let c = CountsSummary {
            n_pulses: 1000,
            idler_clicks: 1000,
            signal1_clicks: 500,
            signal2_clicks: 500,
            two_fold_1i: 500,
            two_fold_2i: 500,
            three_fold_12i: 0,
        };
        let g = heralded_g2(&c).unwrap();
        assert_eq!(g.value, 0.0);
        assert!((g.std_error - 0.004).abs() < 1e-15);
    }

    #[test]
    fn g2_value_and_error() {
        let c = CountsSummary {
            n_pulses: 1_000_000,
            idler_clicks: 10_000,
            signal1_clicks: 2_000,
            signal2_clicks: 2_000,
            two_fold_1i: 400,
            two_fold_2i: 500,
            three_fold_12i: 20,
        };
        let g = heralded_g2(&c).unwrap();
        assert!((g.value - 1.0).abs() < 1e-15);
        let rel = (1.0 / 20.0 + 1.0 / 10_000.0 + 1.0 / 400.0 + 1.0 / 500.0_f64).sqrt();
        assert!((g.std_error - rel).abs() < 1e-15);
    }

    #[test]
    fn g2_needs_two_folds() {
        let c = CountsSummary {
            n_pulses: 10,
            idler_clicks: 3,
            ..Default::default()
        };
        assert!(matches!(heralded_g2(&c), Err(Error::InsufficientStatistics(_))));
    }

    #[test]
    fn mixture_endpoints_and_midpoint() {
        assert_eq!(expected_g2_mixture(0.137, 0.0, 0.0076, 1.07).unwrap(), 0.0076);
        assert_eq!(expected_g2_mixture(0.0, 3.3e-4, 0.0076, 1.07).unwrap(), 1.07);
        assert_eq!(expected_g2_mixture(1.0, 1.0, 0.0, 1.0).unwrap(), 0.75);
        assert!(expected_g2_mixture(0.0, 0.0, 0.1, 1.0).is_err());
        assert!(expected_g2_mixture(-1.0, 1.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn efficiency_corners() {
        assert_eq!(switching_efficiency_estimate(40, 40, 100).unwrap().value, 0.0);
        assert_eq!(switching_efficiency_estimate(100, 0, 100).unwrap().value, 1.0);
        assert_eq!(anti_switching_efficiency_estimate(40, 40, 100).unwrap().value, 1.0);
        assert_eq!(anti_switching_efficiency_estimate(140, 40, 100).unwrap().value, 0.0);
        assert!(switching_efficiency_estimate(1, 0, 0).is_err());
        assert!(anti_switching_efficiency_estimate(1, 0, 0).is_err());
    }

    #[test]
    fn snr_cases() {
        match snr(79_000, 100) {
            SnrEstimate::Ratio { value, std_error } => {
                assert_eq!(value, 790.0);
                assert!((std_error - 790.0 * (1.0 / 79_000.0 + 1.0 / 100.0_f64).sqrt()).abs() < 1e-9);
                assert!((std_error - 79.0).abs() < 0.1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(snr(100, 100).value(), 1.0);
        assert_eq!(snr(300, 0), SnrEstimate::LowerBound { value: 100.0 });
    }

    proptest! {
        #[test]
        fn efficiency_scale_invariance(input in 100u64..100_000, frac in 0.0..1.0_f64, noise in 0u64..500, k in 2u64..50) {
            let switched = (frac * input as f64) as u64 + noise;
            let a = switching_efficiency_estimate(switched, noise, input).unwrap();
            let b = switching_efficiency_estimate(k * switched, k * noise, k * input).unwrap();
            prop_assert!((a.value - b.value).abs() < 1e-12);
            prop_assert!((a.std_error / (k as f64).sqrt() - b.std_error).abs() < 1e-12 * (1.0 + a.std_error));
        }

        #[test]
        fn mixture_monotone_in_noise(ns in 0.001..10.0_f64, n1 in 0.0..10.0_f64, dn in 0.0..10.0_f64,
                                     gi in 0.0..1.0_f64, gn in 1.0..2.5_f64) {
            let a = expected_g2_mixture(ns, n1, gi, gn).unwrap();
            let b = expected_g2_mixture(ns, n1 + dn, gi, gn).unwrap();
            prop_assert!(b >= a - 1e-12);
        }
    }
}
