//! Optical Kerr shutter: nonlinear phase, rotation efficiency and
//! response curves.

mod config;
mod phase;
mod response;

pub use config::{mode_field_area, FiberSpec, ShutterConfig, SignalProfile, MEASURED_PLATEAU, REFERENCE_PUMP_ENERGY};
pub use phase::{
    full_sweep_phase, jones_switching_probability, kerr_jones_matrix, nonlinear_phase, nonlinear_phase_integral,
    switching_efficiency,
};
pub use response::{energy_scan, fwhm, intrinsic_response, total_response, EnergyScan, ResponseCurve};
