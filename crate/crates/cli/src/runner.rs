use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kerrsim_core::shutter::{energy_scan, total_response};
use kerrsim_core::stats::g2_vs_energy_curve;
use serde_json::{json, Value};

use crate::config::{ScanConfig, ScenarioConfig};
use crate::error::{Result, RunError};
use crate::manifest::{sha256_hex, OutputFile, RunManifest, SCHEMA_VERSION};

pub const DELAY_CSV: &str = "delay_scan.csv";
pub const ENERGY_CSV: &str = "energy_scan.csv";
pub const G2_CSV: &str = "g2_scan.csv";

pub const DELAY_HEADER: &str = "tau_ps,efficiency";
pub const ENERGY_HEADER: &str = "energy_nJ,efficiency,noise_per_pulse";
pub const G2_HEADER: &str = "energy_nJ,switch_efficiency,noise_per_pulse,n_pulses,idler_clicks,signal1_clicks,\
signal2_clicks,two_fold_1i,two_fold_2i,three_fold_12i,g2,g2_std_error,g2_expected,g2_baseline,seed,model_sha256,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    DelayScan,
    EnergyScan,
    G2Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DelayScan => "delay-scan",
            Command::EnergyScan => "energy-scan",
            Command::G2Scan => "g2-scan",
        }
    }

    fn scan_kind(self) -> &'static str {
        match self {
            Command::DelayScan => "delay",
            Command::EnergyScan => "energy",
            Command::G2Scan => "g2",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub directory: PathBuf,
    pub manifest: RunManifest,
    /// g2 rows without an estimate.
    pub flagged: usize,
}

struct Table {
    file: &'static str,
    text: String,
    rows: usize,
}

impl Table {
    fn new(file: &'static str, header: &str) -> Self {
        Self {
            file,
            text: format!("{header}\n"),
            rows: 0,
        }
    }

    fn push(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
        self.rows += 1;
    }

    fn write(&self, dir: &Path) -> Result<OutputFile> {
        let path = dir.join(self.file);
        std::fs::write(&path, &self.text).map_err(|e| RunError::io(&path, e))?;
        Ok(OutputFile {
            file: self.file.to_string(),
            rows: self.rows,
            sha256: sha256_hex(self.text.as_bytes()),
        })
    }
}

/// Shortest round-trip form; exponent notation for small magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Runs the scan `config.scan` describes and writes its CSV and manifest
/// into `out_dir` (or `output.directory` when `None`).
pub fn run(command: Command, config: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    if config.scan.kind() != command.scan_kind() {
        return Err(RunError::Config(format!(
            "`{}` needs scan.type = \"{}\", config has \"{}\"",
            command.name(),
            command.scan_kind(),
            config.scan.kind()
        )));
    }
    let started_at = chrono::Utc::now().to_rfc3339();
    let resolved = config.validate()?;
    let mut diagnostics = BTreeMap::new();

    let (table, flagged) = match command {
        Command::DelayScan => (delay_table(config, &mut diagnostics)?, 0),
        Command::EnergyScan => (energy_table(config, &mut diagnostics)?, 0),
        Command::G2Scan => g2_table(config, &mut diagnostics)?,
    };

    let directory = out_dir.map(Path::to_path_buf).unwrap_or_else(|| config.output.directory.clone());
    std::fs::create_dir_all(&directory).map_err(|e| RunError::io(&directory, e))?;
    let outputs = vec![table.write(&directory)?];
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.name().to_string(),
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        config: config.clone(),
        resolved,
        outputs,
        diagnostics,
    };
    manifest.write(&directory)?;
    Ok(RunOutcome {
        directory,
        manifest,
        flagged,
    })
}

pub fn run_delay_scan(config: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    run(Command::DelayScan, config, out_dir)
}

pub fn run_energy_scan(config: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    run(Command::EnergyScan, config, out_dir)
}

pub fn run_g2_scan(config: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    run(Command::G2Scan, config, out_dir)
}

fn delay_table(config: &ScenarioConfig, diagnostics: &mut BTreeMap<String, Value>) -> Result<Table> {
    let shutter = config.shutter_config()?;
    let grid = config.scan.grid()?;
    let delays: Vec<f64> = grid.iter().map(|t| t * 1e-12).collect();
    let curve = total_response(&shutter, &delays)?;

    let mut table = Table::new(DELAY_CSV, DELAY_HEADER);
    for (tau, eta) in grid.iter().zip(&curve.efficiency) {
        table.push(&[tau.to_string(), num(*eta)]);
    }
    diagnostics.insert("peak_efficiency".into(), json!(curve.peak()));
    match curve.fwhm() {
        Ok(w) => {
            diagnostics.insert("fwhm_ps".into(), json!(w * 1e12));
        }
        Err(e) => {
            diagnostics.insert("fwhm_ps".into(), Value::Null);
            diagnostics.insert("fwhm_note".into(), json!(e.to_string()));
        }
    }
    diagnostics.insert("quadrature_rel_tol".into(), json!(shutter.quadrature.rel_tol));
    Ok(table)
}

fn energy_table(config: &ScenarioConfig, diagnostics: &mut BTreeMap<String, Value>) -> Result<Table> {
    let ScanConfig::Energy { delay_ps, .. } = config.scan else {
        unreachable!("checked by run")
    };
    let shutter = config.shutter_config()?;
    let noise = config.noise.to_model()?;
    let grid = config.scan.grid()?;
    let energies: Vec<f64> = grid.iter().map(|e| e * 1e-9).collect();
    let scan = energy_scan(&shutter, &energies, delay_ps * 1e-12)?;

    let mut table = Table::new(ENERGY_CSV, ENERGY_HEADER);
    for ((e_nj, e), eta) in grid.iter().zip(&energies).zip(&scan.efficiency) {
        table.push(&[e_nj.to_string(), num(*eta), num(noise.rate(*e)?)]);
    }
    diagnostics.insert("kappa_rad_per_nJ".into(), json!(scan.kappa * 1e-9));
    diagnostics.insert(
        "peak_efficiency".into(),
        json!(scan.efficiency.iter().copied().fold(0.0, f64::max)),
    );
    Ok(table)
}

fn g2_table(config: &ScenarioConfig, diagnostics: &mut BTreeMap<String, Value>) -> Result<(Table, usize)> {
    let ScanConfig::G2 {
        delay_ps,
        n_pulses,
        seed,
        ..
    } = config.scan
    else {
        unreachable!("checked by run")
    };
    let seed = seed.ok_or_else(|| RunError::Config("g2 scans need scan.seed or --seed".into()))?;
    let shutter = config.shutter_config()?;
    let noise = config.noise.to_model()?;
    let source = config.source_model()?;
    let grid = config.scan.grid()?;
    let energies: Vec<f64> = grid.iter().map(|e| e * 1e-9).collect();
    let scan = g2_vs_energy_curve(&source, &noise, &shutter, &energies, delay_ps * 1e-12, n_pulses, seed)?;

    let mut table = Table::new(G2_CSV, G2_HEADER);
    let mut max_pull: Option<f64> = None;
    for (e_nj, row) in grid.iter().zip(&scan.rows) {
        let c = &row.counts;
        let model_json = serde_json::to_vec(&row.model).expect("model serializes");
        if let (Some(g), Some(x)) = (row.g2, row.expected_g2) {
            if g.std_error > 0.0 {
                let pull = (g.value - x).abs() / g.std_error;
                max_pull = Some(max_pull.map_or(pull, |m: f64| m.max(pull)));
            }
        }
        table.push(&[
            e_nj.to_string(),
            num(row.switch_efficiency),
            num(row.noise_mean),
            c.n_pulses.to_string(),
            c.idler_clicks.to_string(),
            c.signal1_clicks.to_string(),
            c.signal2_clicks.to_string(),
            c.two_fold_1i.to_string(),
            c.two_fold_2i.to_string(),
            c.three_fold_12i.to_string(),
            opt(row.g2.map(|g| g.value)),
            opt(row.g2.map(|g| g.std_error)),
            opt(row.expected_g2),
            num(scan.baseline_g2),
            row.seed.to_string(),
            sha256_hex(&model_json),
            if row.g2.is_some() { "ok" } else { "insufficient_statistics" }.to_string(),
        ]);
    }
    let flagged = scan.flagged();
    diagnostics.insert("baseline_g2".into(), json!(scan.baseline_g2));
    diagnostics.insert("noise_g2".into(), json!(scan.noise_g2));
    diagnostics.insert("flagged_rows".into(), json!(flagged));
    diagnostics.insert("max_abs_pull".into(), json!(max_pull));
    diagnostics.insert("seed".into(), json!(seed));
    Ok((table, flagged))
}
