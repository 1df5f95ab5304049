//! Jones-calculus polarization states and elements.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

/// A (not necessarily normalized) Jones vector in the horizontal/vertical
/// basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector(pub Vector2<Complex64>);

impl JonesVector {
    pub fn new(h: Complex64, v: Complex64) -> Self {
        Self(Vector2::new(h, v))
    }

    /// Linear polarization at `angle_deg` from horizontal.
    pub fn linear(angle_deg: f64) -> Self {
        let a = angle_deg.to_radians();
        Self::new(Complex64::new(a.cos(), 0.0), Complex64::new(a.sin(), 0.0))
    }

    pub fn h(&self) -> Complex64 {
        self.0[0]
    }

    pub fn v(&self) -> Complex64 {
        self.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn normalized(&self) -> Self {
        Self(self.0 / Complex64::new(self.norm_sqr().sqrt(), 0.0))
    }

    /// |⟨analyzer|self⟩|², the power transmitted through an ideal analyzer
    /// that passes `analyzer`.
    pub fn projection_probability(&self, analyzer: &JonesVector) -> f64 {
        let amp = analyzer.0[0].conj() * self.0[0] + analyzer.0[1].conj() * self.0[1];
        amp.norm_sqr() / analyzer.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix(pub Matrix2<Complex64>);

impl JonesMatrix {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// Linear retarder with its fast axis at `fast_axis_deg` from horizontal,
    /// delaying the slow axis by `retardance` radians:
    /// R(α) · diag(1, e^{iΔ}) · R(−α).
    pub fn retarder(fast_axis_deg: f64, retardance: f64) -> Self {
        let a = fast_axis_deg.to_radians();
        let (s, c) = a.sin_cos();
        let xi = Complex64::from_polar(1.0, retardance);
        let one = Complex64::new(1.0, 0.0);
        let cc = Complex64::new(c * c, 0.0);
        let ss = Complex64::new(s * s, 0.0);
        let sc = Complex64::new(s * c, 0.0);
        Self(Matrix2::new(
            cc * one + ss * xi,
            sc * (one - xi),
            sc * (one - xi),
            ss * one + cc * xi,
        ))
    }

    pub fn apply(&self, state: &JonesVector) -> JonesVector {
        JonesVector(self.0 * state.0)
    }

    /// Largest deviation of J†J from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.0.adjoint() * self.0 - Matrix2::identity();
        p.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
