//! Scenario file. Every dimensioned key carries its unit in the name;
//! values are converted to SI when the core model types are built.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use kerrsim_core::optics::{Pulse, PulseShape, SellmeierCoefficients, SellmeierTerm};
use kerrsim_core::quadrature::QuadratureOptions;
use kerrsim_core::shutter::{mode_field_area, FiberSpec, ShutterConfig, SignalProfile};
use kerrsim_core::stats::{
    calibrate_mean_pairs, AnalyzerPort, NoiseModel, NoiseStatistics, PairStatistics, SourceModel,
};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RunError};

const NM: f64 = 1e-9;
const FS: f64 = 1e-15;
const PS: f64 = 1e-12;
const NJ: f64 = 1e-9;
const UM: f64 = 1e-6;

pub const BUILTIN_MATERIAL: &str = "fused_silica";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Auto {
    #[serde(rename = "auto")]
    Auto,
}

/// Either the keyword `"auto"` or a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutoOr {
    Auto(Auto),
    Value(f64),
}

impl Default for AutoOr {
    fn default() -> Self {
        AutoOr::Auto(Auto::Auto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub materials: BTreeMap<String, MaterialConfig>,
    #[serde(default)]
    pub fiber: FiberConfig,
    #[serde(default)]
    pub pump: PumpConfig,
    #[serde(default)]
    pub signal: SignalConfig,
    #[serde(default)]
    pub shutter: ShutterSection,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Sellmeier terms n² = 1 + Σ bᵢ λ² / (λ² − cᵢ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub b: Vec<f64>,
    pub c_um2: Vec<f64>,
    pub valid_range_um: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiberConfig {
    pub material: String,
    pub length_m: f64,
    #[serde(rename = "n2_m2_per_W")]
    pub n2_m2_per_w: f64,
    /// Gaussian-mode area is derived from this unless `effective_area_um2`
    /// is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_field_diameter_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_area_um2: Option<f64>,
    /// Replaces the material walk-off.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walkoff_ps_per_m: Option<f64>,
}

impl Default for FiberConfig {
    fn default() -> Self {
        Self {
            material: BUILTIN_MATERIAL.into(),
            length_m: 0.10,
            n2_m2_per_w: 2.7e-20,
            mode_field_diameter_um: None,
            effective_area_um2: None,
            walkoff_ps_per_m: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpConfig {
    pub wavelength_nm: f64,
    pub fwhm_fs: f64,
    #[serde(rename = "energy_nJ")]
    pub energy_nj: f64,
    pub shape: PulseShape,
    pub polarization_deg: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            wavelength_nm: 800.0,
            fwhm_fs: 410.0,
            energy_nj: 3.0,
            shape: PulseShape::Gaussian,
            polarization_deg: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignalConfig {
    pub wavelength_nm: f64,
    pub profile: SignalProfileConfig,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self {
            wavelength_nm: 685.0,
            profile: SignalProfileConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalProfileConfig {
    Delta,
    Pulse { shape: PulseShape, fwhm_fs: f64 },
    GaussianRect { gaussian_fwhm_fs: f64, rect_width_fs: f64 },
}

impl Default for SignalProfileConfig {
    fn default() -> Self {
        SignalProfileConfig::GaussianRect {
            gaussian_fwhm_fs: 100.0,
            rect_width_fs: 380.0,
        }
    }
}

impl SignalProfileConfig {
    fn to_model(self) -> SignalProfile {
        match self {
            SignalProfileConfig::Delta => SignalProfile::Delta,
            SignalProfileConfig::Pulse { shape, fwhm_fs } => SignalProfile::Pulse {
                shape,
                fwhm: fwhm_fs * FS,
            },
            SignalProfileConfig::GaussianRect {
                gaussian_fwhm_fs,
                rect_width_fs,
            } => SignalProfile::GaussianRect {
                gaussian_fwhm: gaussian_fwhm_fs * FS,
                rect_width: rect_width_fs * FS,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShutterSection {
    pub theta_deg: f64,
    /// `"auto"` sets Δφ(τ = 0) = π at `calibration_energy_nJ`; a number
    /// multiplies n2 directly.
    pub calibration: AutoOr,
    #[serde(rename = "calibration_energy_nJ")]
    pub calibration_energy_nj: f64,
    pub imperfection: f64,
    pub quadrature_rel_tol: f64,
}

impl Default for ShutterSection {
    fn default() -> Self {
        Self {
            theta_deg: 45.0,
            calibration: AutoOr::default(),
            calibration_energy_nj: 3.0,
            imperfection: 0.967,
            quadrature_rel_tol: QuadratureOptions::default().rel_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseStatisticsKind {
    Poissonian,
    Thermal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceConfig {
    /// `"auto"` picks the pair rate that gives `target_g2` without noise.
    pub mean_pairs: AutoOr,
    pub target_g2: f64,
    pub pair_statistics: PairStatistics,
    pub idler_efficiency: f64,
    pub signal_transmission: f64,
    pub dark_count_prob: f64,
    pub analyzer_extinction: f64,
    pub port: AnalyzerPort,
    pub noise_statistics: NoiseStatisticsKind,
    /// Mode count of thermal noise.
    pub noise_modes: u32,
}

impl Default for SourceConfig {
    fn default() -> Self {
        let m = SourceModel::uncalibrated();
        Self {
            mean_pairs: AutoOr::default(),
            target_g2: kerrsim_core::stats::TARGET_INPUT_G2,
            pair_statistics: m.pair_statistics,
            idler_efficiency: m.idler_efficiency,
            signal_transmission: m.signal_transmission,
            dark_count_prob: m.dark_count_prob,
            analyzer_extinction: m.analyzer_extinction,
            port: m.port,
            noise_statistics: NoiseStatisticsKind::Poissonian,
            noise_modes: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    None,
    PowerLaw {
        rate_at_reference_per_pulse: f64,
        #[serde(rename = "reference_energy_nJ")]
        reference_energy_nj: f64,
        exponent: f64,
    },
    Tabulated {
        #[serde(rename = "energies_nJ")]
        energies_nj: Vec<f64>,
        rates_per_pulse: Vec<f64>,
    },
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig::PowerLaw {
            rate_at_reference_per_pulse: 1.3e-4,
            reference_energy_nj: 3.0,
            exponent: 3.0,
        }
    }
}

impl NoiseConfig {
    pub fn to_model(&self) -> Result<NoiseModel> {
        let model = match self {
            NoiseConfig::None => NoiseModel::None,
            NoiseConfig::PowerLaw {
                rate_at_reference_per_pulse,
                reference_energy_nj,
                exponent,
            } => NoiseModel::PowerLaw {
                rate_at_reference: *rate_at_reference_per_pulse,
                reference_energy: reference_energy_nj * NJ,
                exponent: *exponent,
            },
            NoiseConfig::Tabulated {
                energies_nj,
                rates_per_pulse,
            } => NoiseModel::Tabulated {
                energies: energies_nj.iter().map(|e| e * NJ).collect(),
                rates: rates_per_pulse.clone(),
            },
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScanConfig {
    Delay {
        min_ps: f64,
        max_ps: f64,
        steps: usize,
    },
    Energy {
        #[serde(rename = "min_nJ")]
        min_nj: f64,
        #[serde(rename = "max_nJ")]
        max_nj: f64,
        steps: usize,
        #[serde(default)]
        delay_ps: f64,
    },
    G2 {
        #[serde(rename = "min_nJ")]
        min_nj: f64,
        #[serde(rename = "max_nJ")]
        max_nj: f64,
        steps: usize,
        #[serde(default)]
        delay_ps: f64,
        n_pulses: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl ScanConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ScanConfig::Delay { .. } => "delay",
            ScanConfig::Energy { .. } => "energy",
            ScanConfig::G2 { .. } => "g2",
        }
    }

    /// Grid in the scan's own unit (ps for delay scans, nJ otherwise).
    pub fn grid(&self) -> Result<Vec<f64>> {
        let (min, max, steps) = match *self {
            ScanConfig::Delay { min_ps, max_ps, steps } => (min_ps, max_ps, steps),
            ScanConfig::Energy { min_nj, max_nj, steps, .. } | ScanConfig::G2 { min_nj, max_nj, steps, .. } => {
                (min_nj, max_nj, steps)
            }
        };
        linspace(min, max, steps)
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(RunError::Config("scan bounds must be finite".into()));
    }
    match steps {
        0 => Err(RunError::Config("scan.steps must be at least 1".into())),
        1 if min == max => Ok(vec![min]),
        1 => Err(RunError::Config(format!(
            "a single-step scan needs min = max, got {min} and {max}"
        ))),
        _ if max <= min => Err(RunError::Config(format!("scan max ({max}) must exceed min ({min})"))),
        _ => {
            let h = (max - min) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| if i == steps - 1 { max } else { min + i as f64 * h })
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec!["csv".into()],
        }
    }
}

/// Values derived while building the model: calibration constants and the
/// walk-off actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub n2_scale: f64,
    pub walkoff_ps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_pairs: Option<f64>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|source| RunError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| RunError::Config(format!("cannot serialize config: {e}")))
    }

    /// Replaces the g2 scan seed. Other scans are deterministic and ignore it.
    pub fn set_seed(&mut self, value: u64) {
        if let ScanConfig::G2 { seed, .. } = &mut self.scan {
            *seed = Some(value);
        }
    }

    pub fn material(&self, name: &str) -> Result<SellmeierCoefficients> {
        if let Some(m) = self.materials.get(name) {
            if m.b.len() != m.c_um2.len() {
                return Err(RunError::Config(format!(
                    "material `{name}`: {} b terms but {} c_um2 terms",
                    m.b.len(),
                    m.c_um2.len()
                )));
            }
            let terms = m.b.iter().zip(&m.c_um2).map(|(&b, &c_um2)| SellmeierTerm { b, c_um2 }).collect();
            return Ok(SellmeierCoefficients::new(terms, (m.valid_range_um[0], m.valid_range_um[1]))?);
        }
        if name == BUILTIN_MATERIAL {
            return Ok(SellmeierCoefficients::fused_silica());
        }
        Err(RunError::Config(format!("material `{name}` is not defined")))
    }

    fn fiber_spec(&self) -> Result<FiberSpec> {
        let f = &self.fiber;
        let effective_area = match (f.mode_field_diameter_um, f.effective_area_um2) {
            (Some(_), Some(_)) => {
                return Err(RunError::Config(
                    "give fiber.mode_field_diameter_um or fiber.effective_area_um2, not both".into(),
                ))
            }
            (_, Some(a)) => a * UM * UM,
            (Some(d), None) => mode_field_area(d * UM),
            (None, None) => FiberSpec::default().effective_area,
        };
        Ok(FiberSpec {
            length: f.length_m,
            n2: f.n2_m2_per_w,
            effective_area,
            material: self.material(&f.material)?,
            walkoff_override: f.walkoff_ps_per_m.map(|w| w * PS),
        })
    }

    /// Shutter model with the calibration applied.
    pub fn shutter_config(&self) -> Result<ShutterConfig> {
        let s = &self.shutter;
        let config = ShutterConfig {
            fiber: self.fiber_spec()?,
            pump: Pulse {
                center_wavelength: self.pump.wavelength_nm * NM,
                fwhm: self.pump.fwhm_fs * FS,
                energy: self.pump.energy_nj * NJ,
                shape: self.pump.shape,
                polarization_deg: self.pump.polarization_deg,
            },
            signal_wavelength: self.signal.wavelength_nm * NM,
            signal_profile: self.signal.profile.to_model(),
            theta_deg: s.theta_deg,
            calibration: match s.calibration {
                AutoOr::Value(v) => Some(v),
                AutoOr::Auto(_) => None,
            },
            imperfection: s.imperfection,
            quadrature: QuadratureOptions {
                rel_tol: s.quadrature_rel_tol,
                ..QuadratureOptions::default()
            },
        };
        config.validate()?;
        Ok(match s.calibration {
            AutoOr::Auto(_) => config.calibrated(s.calibration_energy_nj * NJ, PI)?,
            AutoOr::Value(_) => config,
        })
    }

    /// Source model without switch or noise; the pair rate is resolved.
    pub fn source_model(&self) -> Result<SourceModel> {
        let s = &self.source;
        let mut model = SourceModel {
            mean_pairs: 0.0,
            pair_statistics: s.pair_statistics,
            idler_efficiency: s.idler_efficiency,
            signal_transmission: s.signal_transmission,
            switch_efficiency: 1.0,
            port: s.port,
            noise_mean: 0.0,
            noise_statistics: match s.noise_statistics {
                NoiseStatisticsKind::Poissonian => NoiseStatistics::Poissonian,
                NoiseStatisticsKind::Thermal => NoiseStatistics::Thermal { modes: s.noise_modes },
            },
            dark_count_prob: s.dark_count_prob,
            analyzer_extinction: s.analyzer_extinction,
        };
        model.validate()?;
        model.mean_pairs = match s.mean_pairs {
            AutoOr::Value(mu) => mu,
            AutoOr::Auto(_) => calibrate_mean_pairs(&model, s.target_g2)?,
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks everything a run needs, short of running it.
    pub fn validate(&self) -> Result<Resolved> {
        if self.output.formats.iter().any(|f| f != "csv") || self.output.formats.is_empty() {
            return Err(RunError::Config(format!(
                "output.formats must be [\"csv\"], got {:?}",
                self.output.formats
            )));
        }
        let grid = self.scan.grid()?;
        let shutter = self.shutter_config()?;
        let noise = self.noise.to_model()?;
        let mut mean_pairs = None;
        match self.scan {
            ScanConfig::Delay { .. } => {}
            ScanConfig::Energy { .. } | ScanConfig::G2 { .. } => {
                if grid[0] < 0.0 {
                    return Err(RunError::Config("pump energies must be non-negative".into()));
                }
                noise.rate(grid[0] * NJ)?;
            }
        }
        if let ScanConfig::G2 { n_pulses, seed, .. } = self.scan {
            if n_pulses == 0 {
                return Err(RunError::Config("scan.n_pulses must be at least 1".into()));
            }
            if seed.is_none() {
                return Err(RunError::Config("g2 scans need scan.seed or --seed".into()));
            }
            mean_pairs = Some(self.source_model()?.mean_pairs);
        }
        Ok(Resolved {
            n2_scale: shutter.n2_scale(),
            walkoff_ps: shutter.total_walkoff()? / PS,
            mean_pairs,
        })
    }
}
