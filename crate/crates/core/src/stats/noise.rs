use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::shutter::REFERENCE_PUMP_ENERGY;

/// Noise photons per pulse at the switched port as a function of pump
/// energy (J).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseModel {
    None,
    /// ν(E) = rate_at_reference · (E / reference_energy)^exponent
    PowerLaw {
        rate_at_reference: f64,
        reference_energy: f64,
        exponent: f64,
    },
    /// Piecewise-linear interpolation; energies strictly increasing.
    /// Outside the table the end values are held.
    Tabulated { energies: Vec<f64>, rates: Vec<f64> },
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::PowerLaw {
            rate_at_reference: 1.3e-4,
            reference_energy: REFERENCE_PUMP_ENERGY,
            exponent: 3.0,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::None => Ok(()),
            NoiseModel::PowerLaw {
                rate_at_reference,
                reference_energy,
                exponent,
            } => {
                ensure_non_negative("noise.rate_at_reference", *rate_at_reference)?;
                ensure_positive("noise.reference_energy", *reference_energy)?;
                ensure_non_negative("noise.exponent", *exponent)
            }
            NoiseModel::Tabulated { energies, rates } => {
                if energies.is_empty() || energies.len() != rates.len() {
                    return Err(Error::domain(
                        "noise table",
                        format!("needs matching non-empty columns, got {} energies and {} rates", energies.len(), rates.len()),
                    ));
                }
                for &r in rates {
                    ensure_non_negative("noise.rates", r)?;
                }
                for &e in energies {
                    ensure_non_negative("noise.energies", e)?;
                }
                if energies.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::domain("noise.energies", "must be strictly increasing"));
                }
                Ok(())
            }
        }
    }

    pub fn rate(&self, energy: f64) -> Result<f64> {
        self.validate()?;
        ensure_non_negative("pump energy", energy)?;
        Ok(match self {
            NoiseModel::None => 0.0,
            NoiseModel::PowerLaw {
                rate_at_reference,
                reference_energy,
                exponent,
            } => {
                if energy == 0.0 {
                    if *exponent == 0.0 { *rate_at_reference } else { 0.0 }
                } else {
                    rate_at_reference * (energy / reference_energy).powf(*exponent)
                }
            }
            NoiseModel::Tabulated { energies, rates } => {
                let i = energies.partition_point(|&e| e <= energy);
                if i == 0 {
                    rates[0]
                } else if i == energies.len() {
                    rates[i - 1]
                } else {
                    let (e0, e1) = (energies[i - 1], energies[i]);
                    let w = (energy - e0) / (e1 - e0);
                    rates[i - 1] + w * (rates[i] - rates[i - 1])
                }
            }
        })
    }
}
