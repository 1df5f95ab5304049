//! Heralded single-photon source, switch and HBT detection: Monte Carlo,
//! exact click probabilities and count estimators.

mod analytic;
mod counts;
mod distribution;
mod estimators;
mod montecarlo;
mod noise;
mod scan;
mod source;

pub use analytic::{calibrate_mean_pairs, click_probabilities, expected_heralded_g2, heralded_signal_photons, ClickProbabilities};
pub use counts::CountsSummary;
pub use distribution::CountDistribution;
pub use estimators::{
    anti_switching_efficiency_estimate, expected_g2_mixture, heralded_g2, snr, switching_efficiency_estimate,
    EfficiencyCounts, EfficiencyEstimate, G2Estimate, SnrEstimate,
};
pub use montecarlo::{simulate_partition, simulate_pulses, PARTITION_PULSES};
pub use noise::NoiseModel;
pub use scan::{g2_vs_energy_curve, point_seed, G2Scan, G2ScanRow};
pub use source::{AnalyzerPort, NoiseStatistics, PairStatistics, SourceModel, TARGET_INPUT_G2};
