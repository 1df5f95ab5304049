use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analytic::{expected_heralded_g2, heralded_signal_photons};
use super::counts::CountsSummary;
use super::estimators::{expected_g2_mixture, heralded_g2, G2Estimate};
use super::montecarlo::simulate_pulses;
use super::noise::NoiseModel;
use super::source::SourceModel;
use crate::error::{ensure_non_negative, Error, Result};
use crate::shutter::{total_response, ShutterConfig};

/// One energy of a g² scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G2ScanRow {
    /// Pump energy, J.
    pub energy: f64,
    pub switch_efficiency: f64,
    pub noise_mean: f64,
    pub seed: u64,
    pub counts: CountsSummary,
    /// `None` when the counts do not support an estimate.
    pub g2: Option<G2Estimate>,
    /// Mixture-model prediction; `None` when neither signal nor noise
    /// reaches the detectors.
    pub expected_g2: Option<f64>,
    /// Source model simulated at this energy.
    pub model: SourceModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G2Scan {
    /// Heralded g² of the input photons: unswitched, noise-free.
    pub baseline_g2: f64,
    pub noise_g2: f64,
    pub rows: Vec<G2ScanRow>,
}

impl G2Scan {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.g2.is_none()).count()
    }
}

/// Per-point seed derived from the scan seed.
pub fn point_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Heralded g² against pump energy.
///
/// At each energy the switch efficiency is the total shutter response at
/// `delay`, the noise rate comes from `noise`, and `n_pulses` pulses are
/// simulated. The `switch_efficiency` and `noise_mean` fields of `source`
/// are replaced per point.
pub fn g2_vs_energy_curve(
    source: &SourceModel,
    noise: &NoiseModel,
    shutter: &ShutterConfig,
    energies: &[f64],
    delay: f64,
    n_pulses: u64,
    seed: u64,
) -> Result<G2Scan> {
    source.validate()?;
    noise.validate()?;
    shutter.validate()?;
    if energies.is_empty() {
        return Err(Error::domain("energies", "grid is empty"));
    }
    for &e in energies {
        ensure_non_negative("energies", e)?;
    }
    if energies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("energies", "must be strictly increasing"));
    }

    let baseline_g2 = expected_heralded_g2(&SourceModel {
        switch_efficiency: 1.0,
        noise_mean: 0.0,
        ..source.clone()
    });
    let noise_g2 = source.noise_statistics.g2();

    let rows = energies
        .par_iter()
        .enumerate()
        .map(|(i, &energy)| {
            let eta = total_response(&shutter.clone().with_pump_energy(energy), &[delay])?.efficiency[0];
            let model = SourceModel {
                switch_efficiency: eta,
                noise_mean: noise.rate(energy)?,
                ..source.clone()
            };
            let seed = point_seed(seed, i as u64);
            let counts = simulate_pulses(&model, n_pulses, seed)?;
            let expected_g2 = expected_g2_mixture(
                heralded_signal_photons(&model.without_noise()),
                model.noise_mean,
                baseline_g2,
                noise_g2,
            )
            .ok();
            Ok(G2ScanRow {
                energy,
                switch_efficiency: eta,
                noise_mean: model.noise_mean,
                seed,
                counts,
                g2: heralded_g2(&counts).ok(),
                expected_g2,
                model,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(G2Scan {
        baseline_g2,
        noise_g2,
        rows,
    })
}
