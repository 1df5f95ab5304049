//! Scenario files, scan orchestration and run manifests for the `kerrsim`
//! binary.

pub mod config;
pub mod error;
pub mod manifest;
pub mod runner;

pub use config::ScenarioConfig;
pub use error::{Result, RunError};
pub use manifest::RunManifest;
pub use runner::{run, run_delay_scan, run_energy_scan, run_g2_scan, Command, RunOutcome};
