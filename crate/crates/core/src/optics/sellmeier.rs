//! Sellmeier dispersion model and the group velocities derived from it.
//!
//! n²(λ) = 1 + Σ Bᵢ λ² / (λ² − Cᵢ), λ in µm and Cᵢ in µm².
//!
//! The group index uses the analytic derivative of that sum,
//! n_g = n − λ dn/dλ = n + (1/n) Σ Bᵢ Cᵢ λ² / (λ² − Cᵢ)².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

/// One resonance term of the Sellmeier sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SellmeierTerm {
    /// Oscillator strength, dimensionless.
    pub b: f64,
    /// Resonance wavelength squared, µm².
    pub c_um2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionResult {
    pub n_phase: f64,
    pub n_group: f64,
    /// m/s
    pub group_velocity: f64,
}

/// Validated Sellmeier coefficients together with the wavelength range the
/// fit is valid over. Evaluation outside that range is an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSellmeier", into = "RawSellmeier")]
pub struct SellmeierCoefficients {
    terms: Vec<SellmeierTerm>,
    range_um: (f64, f64),
}

/// Serialized form: `terms = [[B, C_um2], ...]`, `valid_range_um = [min, max]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSellmeier {
    pub terms: Vec<[f64; 2]>,
    pub valid_range_um: [f64; 2],
}

impl TryFrom<RawSellmeier> for SellmeierCoefficients {
    type Error = Error;

    fn try_from(raw: RawSellmeier) -> Result<Self> {
        let terms = raw
            .terms
            .iter()
            .map(|&[b, c_um2]| SellmeierTerm { b, c_um2 })
            .collect();
        Self::new(terms, (raw.valid_range_um[0], raw.valid_range_um[1]))
    }
}

impl From<SellmeierCoefficients> for RawSellmeier {
    fn from(c: SellmeierCoefficients) -> Self {
        RawSellmeier {
            terms: c.terms.iter().map(|t| [t.b, t.c_um2]).collect(),
            valid_range_um: [c.range_um.0, c.range_um.1],
        }
    }
}

impl SellmeierCoefficients {
    /// Builds a material model.
    ///
    /// Coefficients must be non-negative; `B = 0` gives a vacuum-like term
    /// and `C = 0` a dispersionless one. No resonance may fall inside the
    /// valid range.
    pub fn new(terms: Vec<SellmeierTerm>, range_um: (f64, f64)) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("sellmeier.terms", "at least one term is required"));
        }
        let (lo, hi) = range_um;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::domain(
                "sellmeier.valid_range_um",
                format!("need 0 < min < max, got [{lo}, {hi}]"),
            ));
        }
        for t in &terms {
            if !(t.b.is_finite() && t.b >= 0.0 && t.c_um2.is_finite() && t.c_um2 >= 0.0) {
                return Err(Error::domain(
                    "sellmeier.terms",
                    format!("coefficients must be finite and non-negative, got B={}, C={}", t.b, t.c_um2),
                ));
            }
            let resonance = t.c_um2.sqrt();
            if t.b > 0.0 && resonance >= lo && resonance <= hi {
                return Err(Error::domain(
                    "sellmeier.terms",
                    format!("resonance at {resonance} µm lies inside the valid range"),
                ));
            }
        }
        Ok(Self { terms, range_um })
    }

    /// Malitson's three-term room-temperature fit for fused silica,
    /// valid 0.21–3.71 µm.
    pub fn fused_silica() -> Self {
        Self::new(
            vec![
                SellmeierTerm { b: 0.696_166_3, c_um2: 0.068_404_3_f64.powi(2) },
                SellmeierTerm { b: 0.407_942_6, c_um2: 0.116_241_4_f64.powi(2) },
                SellmeierTerm { b: 0.897_479_4, c_um2: 9.896_161_f64.powi(2) },
            ],
            (0.21, 3.71),
        )
        .expect("built-in coefficients are valid")
    }

    pub fn terms(&self) -> &[SellmeierTerm] {
        &self.terms
    }

    pub fn valid_range_um(&self) -> (f64, f64) {
        self.range_um
    }

    fn check_range(&self, wavelength_um: f64, strict: bool) -> Result<()> {
        let (lo, hi) = self.range_um;
        let inside = if strict {
            wavelength_um > lo && wavelength_um < hi
        } else {
            wavelength_um >= lo && wavelength_um <= hi
        };
        if inside {
            Ok(())
        } else {
            Err(Error::WavelengthOutOfRange {
                wavelength_um,
                min_um: lo,
                max_um: hi,
            })
        }
    }

    /// Phase index at `wavelength` (metres).
    pub fn refractive_index(&self, wavelength: f64) -> Result<f64> {
        let l_um = wavelength * 1e6;
        self.check_range(l_um, false)?;
        Ok(self.n_squared(l_um).sqrt())
    }

    /// Phase and group index at `wavelength` (metres). The wavelength must
    /// lie strictly inside the valid range.
    pub fn group_index(&self, wavelength: f64) -> Result<DispersionResult> {
        let l_um = wavelength * 1e6;
        self.check_range(l_um, true)?;
        let l2 = l_um * l_um;
        let n = self.n_squared(l_um).sqrt();
        let correction: f64 = self
            .terms
            .iter()
            .map(|t| t.b * t.c_um2 * l2 / (l2 - t.c_um2).powi(2))
            .sum();
        let n_group = n + correction / n;
        Ok(DispersionResult {
            n_phase: n,
            n_group,
            group_velocity: SPEED_OF_LIGHT / n_group,
        })
    }

    fn n_squared(&self, l_um: f64) -> f64 {
        let l2 = l_um * l_um;
        1.0 + self.terms.iter().map(|t| t.b * l2 / (l2 - t.c_um2)).sum::<f64>()
    }
}

pub fn refractive_index(coeffs: &SellmeierCoefficients, wavelength: f64) -> Result<f64> {
    coeffs.refractive_index(wavelength)
}

pub fn group_index(coeffs: &SellmeierCoefficients, wavelength: f64) -> Result<DispersionResult> {
    coeffs.group_index(wavelength)
}

/// Group-delay walk-off per unit length, s/m:
/// d_w = 1/v_g(pump) − 1/v_g(signal).
///
/// Positive when the pump is the slower pulse. For fused silica with an
/// 800 nm pump and a 685 nm signal the pump is faster and d_w < 0.
pub fn walkoff(coeffs: &SellmeierCoefficients, pump_wavelength: f64, signal_wavelength: f64) -> Result<f64> {
    let pump = coeffs.group_index(pump_wavelength)?;
    let signal = coeffs.group_index(signal_wavelength)?;
    Ok((pump.n_group - signal.n_group) / SPEED_OF_LIGHT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn silica() -> SellmeierCoefficients {
        SellmeierCoefficients::fused_silica()
    }

    // Reference values from a 40-digit evaluation of the same Sellmeier sum
    // with a numerically differentiated group index.
    #[test]
    fn silica_indices() {
        let s = silica();
        assert_abs_diff_eq!(s.refractive_index(800e-9).unwrap(), 1.4533, epsilon = 5e-4);
        assert_abs_diff_eq!(s.refractive_index(685e-9).unwrap(), 1.4560, epsilon = 5e-4);
        assert_abs_diff_eq!(s.refractive_index(800e-9).unwrap(), 1.453_317_254_858_742, epsilon = 1e-12);
        let g800 = s.group_index(800e-9).unwrap();
        let g685 = s.group_index(685e-9).unwrap();
        assert_abs_diff_eq!(g800.n_group, 1.467, epsilon = 1e-3);
        assert_abs_diff_eq!(g685.n_group, 1.472, epsilon = 1e-3);
        assert_abs_diff_eq!(g800.n_group, 1.467_144_755_351_564, epsilon = 1e-12);
        assert_abs_diff_eq!(g685.n_group, 1.472_046_973_765_57, epsilon = 1e-12);
        assert!(g800.n_group >= g800.n_phase);
    }

    #[test]
    fn silica_walkoff_over_ten_cm() {
        let d = walkoff(&silica(), 800e-9, 685e-9).unwrap();
        assert!(d < 0.0, "800 nm pump outruns the 685 nm signal");
        let total_ps = d.abs() * 0.10 * 1e12;
        assert_abs_diff_eq!(total_ps, 1.6, epsilon = 0.16);
        assert_abs_diff_eq!(total_ps, 1.635_204_049_731, epsilon = 1e-9);
    }

    #[test]
    fn walkoff_identical_wavelengths_is_zero() {
        assert_eq!(walkoff(&silica(), 800e-9, 800e-9).unwrap(), 0.0);
    }

    #[test]
    fn vacuum_term_gives_unit_index() {
        let vac = SellmeierCoefficients::new(vec![SellmeierTerm { b: 0.0, c_um2: 0.01 }], (0.4, 2.0)).unwrap();
        assert_eq!(vac.refractive_index(1e-6).unwrap(), 1.0);
    }

    #[test]
    fn dispersionless_term_has_equal_indices() {
        let flat = SellmeierCoefficients::new(vec![SellmeierTerm { b: 1.1, c_um2: 0.0 }], (0.4, 2.0)).unwrap();
        let r = flat.group_index(0.8e-6).unwrap();
        assert_eq!(r.n_group, r.n_phase);
        assert_abs_diff_eq!(r.n_phase, 2.1_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let s = silica();
        assert!(matches!(s.refractive_index(100e-9), Err(Error::WavelengthOutOfRange { .. })));
        assert!(matches!(s.refractive_index(5e-6), Err(Error::WavelengthOutOfRange { .. })));
        // boundary is fine for n but not for the derivative
        assert!(s.refractive_index(0.21e-6).is_ok());
        assert!(matches!(s.group_index(0.21e-6), Err(Error::WavelengthOutOfRange { .. })));
        assert!(walkoff(&s, 800e-9, 4e-6).is_err());
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert!(SellmeierCoefficients::new(vec![], (0.4, 2.0)).is_err());
        assert!(SellmeierCoefficients::new(vec![SellmeierTerm { b: -1.0, c_um2: 0.01 }], (0.4, 2.0)).is_err());
        assert!(SellmeierCoefficients::new(vec![SellmeierTerm { b: 1.0, c_um2: 1.0 }], (0.4, 2.0)).is_err());
        assert!(SellmeierCoefficients::new(vec![SellmeierTerm { b: 1.0, c_um2: 0.01 }], (2.0, 0.4)).is_err());
    }

    #[test]
    fn raw_form_roundtrip() {
        let raw: RawSellmeier = silica().into();
        assert_eq!(raw.terms.len(), 3);
        assert_eq!(SellmeierCoefficients::try_from(raw).unwrap(), silica());
        let bad = RawSellmeier {
            terms: vec![[1.0, 1.0]],
            valid_range_um: [0.4, 2.0],
        };
        assert!(SellmeierCoefficients::try_from(bad).is_err());
    }

    #[test]
    fn monotone_decreasing_600_to_1000_nm() {
        let s = silica();
        let mut prev = f64::INFINITY;
        for i in 0..=400 {
            let n = s.refractive_index((600.0 + i as f64) * 1e-9).unwrap();
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn analytic_derivative_matches_central_differences() {
        let s = silica();
        let h = 0.1e-9;
        for i in 0..20 {
            let l = (600.0 + 20.0 * i as f64) * 1e-9;
            let dn = (s.refractive_index(l + h).unwrap() - s.refractive_index(l - h).unwrap()) / (2.0 * h);
            let fd = s.refractive_index(l).unwrap() - l * dn;
            let an = s.group_index(l).unwrap().n_group;
            assert!(((an - fd) / an).abs() < 1e-6, "λ={l}: analytic {an} vs fd {fd}");
        }
    }

    proptest! {
        #[test]
        fn walkoff_antisymmetric(a in 400.0..1600.0_f64, b in 400.0..1600.0_f64) {
            let s = silica();
            let ab = walkoff(&s, a * 1e-9, b * 1e-9).unwrap();
            let ba = walkoff(&s, b * 1e-9, a * 1e-9).unwrap();
            prop_assert_eq!(ab, -ba);
        }
    }
}
