//! Material dispersion, pulse envelopes and polarization primitives.

pub mod jones;
pub mod pulse;
pub mod sellmeier;

pub use jones::{JonesMatrix, JonesVector};
pub use pulse::{pulse_intensity, Pulse, PulseShape};
pub use sellmeier::{group_index, refractive_index, walkoff, DispersionResult, SellmeierCoefficients, SellmeierTerm};
