//! Adaptive Simpson quadrature with a step-halving convergence test.
//!
//! The interval is first cut into `panels` equal pieces so that narrow
//! features (a short pump pulse inside a long fiber) cannot slip between the
//! coarse sample points. Each panel is then refined independently: a
//! sub-interval is accepted when the Simpson estimate on the halved step
//! agrees with the full-step estimate to within its share of the tolerance,
//! and the Richardson-corrected value is kept.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOptions {
    /// Target error relative to the magnitude of the integral.
    pub rel_tol: f64,
    /// Absolute error floor, used when the integral is (close to) zero.
    pub abs_tol: f64,
    /// Maximum bisection depth below a panel.
    pub max_depth: u32,
    /// Number of equal initial panels.
    pub panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_depth: 40,
            panels: 16,
        }
    }
}

impl QuadratureOptions {
    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the accepted per-interval step-halving differences.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Raised when some sub-interval still failed the step-halving test at
/// `max_depth`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error(
    "quadrature not converged on [{a:e}, {b:e}]: worst interval [{worst_a:e}, {worst_b:e}] \
     has error estimate {worst_error:e} vs tolerance {tolerance:e} after {evaluations} evaluations"
)]
pub struct QuadratureError {
    pub a: f64,
    pub b: f64,
    pub worst_a: f64,
    pub worst_b: f64,
    pub worst_error: f64,
    pub tolerance: f64,
    pub evaluations: usize,
}

struct Pass {
    value: f64,
    error: f64,
    evaluations: usize,
    worst: Option<(f64, f64, f64)>,
}

/// Integrates `f` over `[a, b]`.
///
/// An empty or reversed interval integrates to zero.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<Integral, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(b > a) {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let panels = opts.panels.max(1);
    let h = (b - a) / panels as f64;

    // Coarse Simpson pass fixes the tolerance scale.
    let mut nodes = Vec::with_capacity(2 * panels + 1);
    for i in 0..=2 * panels {
        let x = if i == 2 * panels { b } else { a + 0.5 * h * i as f64 };
        nodes.push((x, f(x)));
    }
    let mut evaluations = nodes.len();
    let coarse: f64 = (0..panels)
        .map(|p| simpson(h, nodes[2 * p].1, nodes[2 * p + 1].1, nodes[2 * p + 2].1))
        .sum();

    let mut scale = coarse.abs();
    // A refined pass can reveal that the coarse estimate badly misjudged the
    // integral (a feature missed by the coarse grid); the budget is then
    // rescaled and the pass repeated.
    let mut passes = 0;
    loop {
        passes += 1;
        let tolerance = (opts.rel_tol * scale).max(opts.abs_tol);
        let pass = refine_panels(&f, &nodes, h, tolerance, opts.max_depth);
        evaluations += pass.evaluations;
        if let Some((wa, wb, werr)) = pass.worst {
            return Err(QuadratureError {
                a,
                b,
                worst_a: wa,
                worst_b: wb,
                worst_error: werr,
                tolerance,
                evaluations,
            });
        }
        let budget_ok = opts.rel_tol * pass.value.abs() >= 0.5 * tolerance || tolerance <= opts.abs_tol;
        if budget_ok || passes == 4 {
            return Ok(Integral {
                value: pass.value,
                error_estimate: pass.error,
                evaluations,
            });
        }
        scale = pass.value.abs();
    }
}

fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine_panels<F: Fn(f64) -> f64>(
    f: &F,
    nodes: &[(f64, f64)],
    h: f64,
    tolerance: f64,
    max_depth: u32,
) -> Pass {
    let panels = (nodes.len() - 1) / 2;
    let width = h * panels as f64;
    let mut pass = Pass {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        worst: None,
    };
    for p in 0..panels {
        let (x0, f0) = nodes[2 * p];
        let (_, fm) = nodes[2 * p + 1];
        let (x1, f1) = nodes[2 * p + 2];
        let whole = simpson(x1 - x0, f0, fm, f1);
        let local_tol = tolerance * (x1 - x0) / width;
        refine(f, x0, x1, f0, fm, f1, whole, local_tol, max_depth, &mut pass);
    }
    pass
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    pass: &mut Pass,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    pass.evaluations += 2;
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol {
        pass.value += left + right + diff / 15.0;
        pass.error += diff.abs() / 15.0;
        return;
    }
    if depth == 0 || m <= a || m >= b {
        pass.value += left + right + diff / 15.0;
        pass.error += diff.abs() / 15.0;
        let err = diff.abs() / 15.0;
        if pass.worst.is_none_or(|(_, _, w)| err > w) {
            pass.worst = Some((a, b, err));
        }
        return;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, pass);
    refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, pass);
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        // Simpson is exact for cubics.
        let r = adaptive_simpson(|x| 3.0 * x * x * x - x + 2.0, -1.0, 2.0, &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(r.value, 3.0 * (16.0 - 1.0) / 4.0 - 1.5 + 6.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let s = 0.3_f64;
        let f = |x: f64| (-x * x / (2.0 * s * s)).exp();
        let r = adaptive_simpson(f, -10.0, 10.0, &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(r.value, s * (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn narrow_peak_found_with_enough_panels() {
        let f = |x: f64| (-(x - 0.731).powi(2) / (2.0 * 1e-4_f64.powi(2))).exp();
        let opts = QuadratureOptions::default().with_panels(4000);
        let r = adaptive_simpson(f, 0.0, 1.0, &opts).unwrap();
        assert_relative_eq!(r.value, 1e-4 * (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn zero_integrand() {
        let r = adaptive_simpson(|_| 0.0, 0.0, 1.0, &QuadratureOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn reversed_interval_is_zero() {
        let r = adaptive_simpson(|x| x, 1.0, 0.0, &QuadratureOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.evaluations, 0);
    }

    #[test]
    fn discontinuity_reports_diagnostics() {
        let opts = QuadratureOptions {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_depth: 6,
            panels: 1,
        };
        let err = adaptive_simpson(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, &opts).unwrap_err();
        assert!(err.worst_a <= 0.3 && 0.3 <= err.worst_b);
        assert!(err.worst_error > 0.0);
        assert!(err.evaluations > 0);
    }
}
