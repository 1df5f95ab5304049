use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Resolved, ScenarioConfig};
use crate::error::{Result, RunError};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Relative to the output directory.
    pub file: String,
    /// Data rows, header excluded.
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub code_version: String,
    pub command: String,
    pub started_at: String,
    pub finished_at: String,
    pub config: ScenarioConfig,
    pub resolved: Resolved,
    pub outputs: Vec<OutputFile>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| RunError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| RunError::io(&path, e))
    }

    /// Checks that each listed file exists with the recorded row count and
    /// digest.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for out in &self.outputs {
            let path = dir.join(&out.file);
            let bytes = std::fs::read(&path).map_err(|e| RunError::io(&path, e))?;
            let rows = bytes.iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
            if rows != out.rows {
                return Err(RunError::Config(format!(
                    "{}: manifest records {} rows, file has {rows}",
                    out.file, out.rows
                )));
            }
            if sha256_hex(&bytes) != out.sha256 {
                return Err(RunError::Config(format!("{}: digest mismatch", out.file)));
            }
        }
        Ok(())
    }
}
