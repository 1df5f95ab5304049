//! Fiber optical Kerr shutter for heralded single photons.
//!
//! The crate is split along the three physical layers of the model:
//!
//! * [`optics`]: fused-silica dispersion, group-velocity walk-off, analytic
//!   pulse envelopes and Jones-calculus primitives.
//! * [`shutter`]: cross-phase-modulation phase accumulated while the pump
//!   walks through the signal, the resulting polarization rotation
//!   efficiency, and delay / pump-energy response curves.
//! * [`stats`]: Monte Carlo heralded photon counting with a Hanbury
//!   Brown–Twiss pair of click detectors, exact click-probability
//!   expectations, and the g², efficiency and SNR estimators.
//!
//! All quantities are SI internally (metres, seconds, joules, watts).
//! Angles are degrees where they describe polarization orientation and
//! radians where they are optical phases.

pub mod error;
pub mod optics;
pub mod quadrature;
pub mod shutter;
pub mod stats;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
