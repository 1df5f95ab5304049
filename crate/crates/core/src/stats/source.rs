use serde::{Deserialize, Serialize};

use super::distribution::CountDistribution;
use crate::error::{ensure_non_negative, ensure_probability, Error, Result};

/// Heralded g² of the unswitched input photons.
pub const TARGET_INPUT_G2: f64 = 0.0076;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatistics {
    /// Two-mode squeezed vacuum; each arm is thermal.
    TwoModeSqueezed,
    Poissonian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseStatistics {
    Poissonian,
    /// Multimode thermal light, g² = 1 + 1/modes.
    Thermal { modes: u32 },
}

impl NoiseStatistics {
    /// g²(0) of the noise photons on their own.
    pub fn g2(&self) -> f64 {
        match *self {
            NoiseStatistics::Poissonian => 1.0,
            NoiseStatistics::Thermal { modes } => 1.0 + 1.0 / modes as f64,
        }
    }
}

/// Analyzer projection after the Kerr fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyzerPort {
    /// Passes photons whose polarization was rotated.
    Switched,
    /// Passes photons left in their input polarization.
    AntiSwitched,
}

/// Heralded pair source, Kerr switch and detection chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceModel {
    /// Mean pairs per pulse.
    pub mean_pairs: f64,
    pub pair_statistics: PairStatistics,
    /// Probability an idler photon produces a herald click.
    pub idler_efficiency: f64,
    /// Coupling and detection probability of a signal photon, excluding the
    /// switch and analyzer.
    pub signal_transmission: f64,
    /// Probability the switch rotates a signal photon.
    pub switch_efficiency: f64,
    pub port: AnalyzerPort,
    /// Detected noise photons per pulse at the analyzer port.
    pub noise_mean: f64,
    pub noise_statistics: NoiseStatistics,
    /// Per detector, per pulse.
    pub dark_count_prob: f64,
    /// Fraction of wrongly polarized light passing the analyzer.
    pub analyzer_extinction: f64,
}

impl Default for SourceModel {
    /// Tens-of-percent heralding and collection efficiencies, no noise,
    /// with the pair rate calibrated to the input g².
    fn default() -> Self {
        let mut model = Self::uncalibrated();
        model.mean_pairs = super::analytic::calibrate_mean_pairs(&model, TARGET_INPUT_G2)
            .expect("default source admits the target g2");
        model
    }
}

impl SourceModel {
    /// The default detection chain with a placeholder pair rate.
    pub fn uncalibrated() -> Self {
        Self {
            mean_pairs: 0.002,
            pair_statistics: PairStatistics::TwoModeSqueezed,
            idler_efficiency: 0.2,
            signal_transmission: 0.15,
            switch_efficiency: 1.0,
            port: AnalyzerPort::Switched,
            noise_mean: 0.0,
            noise_statistics: NoiseStatistics::Poissonian,
            dark_count_prob: 1e-6,
            analyzer_extinction: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("mean_pairs", self.mean_pairs)?;
        ensure_non_negative("noise_mean", self.noise_mean)?;
        ensure_probability("idler_efficiency", self.idler_efficiency)?;
        ensure_probability("signal_transmission", self.signal_transmission)?;
        ensure_probability("switch_efficiency", self.switch_efficiency)?;
        ensure_probability("dark_count_prob", self.dark_count_prob)?;
        ensure_probability("analyzer_extinction", self.analyzer_extinction)?;
        if let NoiseStatistics::Thermal { modes: 0 } = self.noise_statistics {
            return Err(Error::domain("noise_statistics.modes", "must be at least 1"));
        }
        Ok(())
    }

    pub fn pair_distribution(&self) -> CountDistribution {
        match self.pair_statistics {
            PairStatistics::TwoModeSqueezed => CountDistribution::thermal(self.mean_pairs),
            PairStatistics::Poissonian => CountDistribution::Poisson { mean: self.mean_pairs },
        }
    }

    pub fn noise_distribution(&self) -> CountDistribution {
        match self.noise_statistics {
            NoiseStatistics::Poissonian => CountDistribution::Poisson { mean: self.noise_mean },
            NoiseStatistics::Thermal { modes } => CountDistribution::NegativeBinomial {
                mean: self.noise_mean,
                modes: modes as f64,
            },
        }
    }

    /// Probability a signal photon passes the analyzer, given the switch
    /// rotated it with probability `switch_efficiency`.
    pub fn analyzer_pass_probability(&self) -> f64 {
        let (s, e) = (self.switch_efficiency, self.analyzer_extinction);
        match self.port {
            AnalyzerPort::Switched => s * (1.0 - e) + (1.0 - s) * e,
            AnalyzerPort::AntiSwitched => (1.0 - s) * (1.0 - e) + s * e,
        }
    }

    /// Probability a signal photon reaches the beam splitter of the
    /// detection arm.
    pub fn signal_detection_probability(&self) -> f64 {
        self.signal_transmission * self.analyzer_pass_probability()
    }

    pub fn without_noise(&self) -> Self {
        Self {
            noise_mean: 0.0,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyzer_leakage() {
        let mut m = SourceModel::uncalibrated();
        m.switch_efficiency = 1.0;
        assert!((m.analyzer_pass_probability() - 0.99).abs() < 1e-15);
        m.port = AnalyzerPort::AntiSwitched;
        assert!((m.analyzer_pass_probability() - 0.01).abs() < 1e-15);
        m.switch_efficiency = 0.0;
        assert!((m.analyzer_pass_probability() - 0.99).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(SourceModel::uncalibrated().validate().is_ok());
        let bad = [
            SourceModel { idler_efficiency: 1.5, ..SourceModel::uncalibrated() },
            SourceModel { mean_pairs: -0.1, ..SourceModel::uncalibrated() },
            SourceModel { dark_count_prob: -1e-6, ..SourceModel::uncalibrated() },
            SourceModel { noise_statistics: NoiseStatistics::Thermal { modes: 0 }, ..SourceModel::uncalibrated() },
        ];
        for m in bad {
            assert!(m.validate().is_err());
        }
    }

    #[test]
    fn noise_g2() {
        assert_eq!(NoiseStatistics::Poissonian.g2(), 1.0);
        assert!((NoiseStatistics::Thermal { modes: 15 }.g2() - 1.0666666666666667).abs() < 1e-15);
    }
}
