//! Exact click probabilities of the source model.
//!
//! Every photon is routed independently, so the probability that none of
//! a set S of detectors fires factorizes into generating functions:
//!
//! P(no click in S) = (1 − d)^|S| · G_pair(1 − y_pair) · G_noise(1 − y_noise)
//!
//! with y the probability that a single pair (or noise photon) triggers a
//! detector in S. Inclusion–exclusion over subsets then gives the
//! probability that every detector in a set fires.

use super::source::SourceModel;
use crate::error::{Error, Result};

const IDLER: u8 = 0b001;
const SIGNAL1: u8 = 0b010;
const SIGNAL2: u8 = 0b100;

/// Per-pulse click probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickProbabilities {
    pub herald: f64,
    pub signal1: f64,
    pub signal2: f64,
    pub herald_signal1: f64,
    pub herald_signal2: f64,
    pub herald_both: f64,
}

impl ClickProbabilities {
    /// P₁₂ᵢ P_i / (P₁ᵢ P₂ᵢ).
    pub fn heralded_g2(&self) -> f64 {
        self.herald_both * self.herald / (self.herald_signal1 * self.herald_signal2)
    }
}

pub fn click_probabilities(model: &SourceModel) -> ClickProbabilities {
    let pairs = model.pair_distribution();
    let noise = model.noise_distribution();
    let eta_i = model.idler_efficiency;
    let p_s = model.signal_detection_probability();
    let ln_dark = (-model.dark_count_prob).ln_1p();

    // ln P(no click in S); kept in log form so that expm1 preserves
    // the small differences.
    let ln_silent = |set: u8| -> f64 {
        let signal_share = 0.5 * ((set & SIGNAL1 != 0) as u8 + (set & SIGNAL2 != 0) as u8) as f64;
        let (idler_hit, idler_miss) = if set & IDLER != 0 { (eta_i, 1.0 - eta_i) } else { (0.0, 1.0) };
        let y_pair = idler_hit + idler_miss * p_s * signal_share;
        set.count_ones() as f64 * ln_dark
            + pairs.ln_pgf_complement(y_pair)
            + noise.ln_pgf_complement(signal_share)
    };
    let all_fire = |set: u8| -> f64 {
        let mut p = 0.0;
        let mut sub = set;
        while sub != 0 {
            let sign = if sub.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            p += sign * ln_silent(sub).exp_m1();
            sub = (sub - 1) & set;
        }
        p
    };
    ClickProbabilities {
        herald: all_fire(IDLER),
        signal1: all_fire(SIGNAL1),
        signal2: all_fire(SIGNAL2),
        herald_signal1: all_fire(IDLER | SIGNAL1),
        herald_signal2: all_fire(IDLER | SIGNAL2),
        herald_both: all_fire(IDLER | SIGNAL1 | SIGNAL2),
    }
}

/// Heralded g² the model converges to for infinitely many pulses.
pub fn expected_heralded_g2(model: &SourceModel) -> f64 {
    click_probabilities(model).heralded_g2()
}

/// Mean number of pair-generated signal photons reaching the detection
/// beam splitter per heralded pulse.
pub fn heralded_signal_photons(model: &SourceModel) -> f64 {
    let pairs = model.pair_distribution();
    let herald = click_probabilities(&model.without_noise()).herald;
    if herald == 0.0 {
        return 0.0;
    }
    let miss = 1.0 - model.idler_efficiency;
    // E[n · 1{herald}] = E[n] − (1 − d) E[n missᶰ]
    let heralded_pairs = pairs.mean() - (1.0 - model.dark_count_prob) * miss * pairs.pgf_derivative(miss);
    model.signal_detection_probability() * heralded_pairs / herald
}

/// Finds the mean pair number at which the noise-free heralded g² of
/// `model` equals `target_g2`.
///
/// With dark counts the heralded g² is large at vanishing pair rates
/// (accidentals dominate), falls to a minimum and then rises with
/// multi-pair emission. The root on the rising branch is returned.
pub fn calibrate_mean_pairs(model: &SourceModel, target_g2: f64) -> Result<f64> {
    model.validate()?;
    if !(target_g2 > 0.0 && target_g2.is_finite()) {
        return Err(Error::domain("target_g2", "must be finite and > 0"));
    }
    let base = model.without_noise();
    let g2_at = |mu: f64| {
        let g = expected_heralded_g2(&SourceModel {
            mean_pairs: mu,
            ..base.clone()
        });
        if g.is_finite() { g } else { f64::INFINITY }
    };

    let grid: Vec<f64> = (0..=240).map(|i| 10f64.powf(-9.0 + i as f64 * 10.0 / 240.0)).collect();
    let values: Vec<f64> = grid.iter().map(|&mu| g2_at(mu)).collect();
    let (imin, gmin) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &g)| if g < acc.1 { (i, g) } else { acc });
    if gmin > target_g2 {
        return Err(Error::domain(
            "target_g2",
            format!("{target_g2} is below the smallest achievable heralded g2 {gmin:.3e}"),
        ));
    }
    let upper = (imin..grid.len())
        .find(|&i| values[i] >= target_g2)
        .ok_or_else(|| Error::domain("target_g2", format!("{target_g2} not reached for mean pairs up to 10")))?;
    if upper == imin {
        return Ok(grid[imin]);
    }
    let (mut lo, mut hi) = (grid[upper - 1], grid[upper]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g2_at(mid) < target_g2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
