//! Photon-number distributions of a single pulse.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

/// Upper bound on the inversion walk; far beyond any mean this crate is
/// used with.
const MAX_WALK: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountDistribution {
    Poisson { mean: f64 },
    /// Sum of `modes` independent thermal modes sharing `mean` equally.
    /// One mode is the Bose–Einstein (thermal) distribution.
    NegativeBinomial { mean: f64, modes: f64 },
}

impl CountDistribution {
    pub fn thermal(mean: f64) -> Self {
        CountDistribution::NegativeBinomial { mean, modes: 1.0 }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            CountDistribution::Poisson { mean } | CountDistribution::NegativeBinomial { mean, .. } => mean,
        }
    }

    /// ln G(1 − y) with G the probability generating function; accurate
    /// for small `y`.
    pub fn ln_pgf_complement(&self, y: f64) -> f64 {
        match *self {
            CountDistribution::Poisson { mean } => -mean * y,
            CountDistribution::NegativeBinomial { mean, modes } => -modes * (mean / modes * y).ln_1p(),
        }
    }

    pub fn pgf(&self, x: f64) -> f64 {
        self.ln_pgf_complement(1.0 - x).exp()
    }

    /// G'(x) = E[n x^(n−1)].
    pub fn pgf_derivative(&self, x: f64) -> f64 {
        match *self {
            CountDistribution::Poisson { mean } => mean * (-mean * (1.0 - x)).exp(),
            CountDistribution::NegativeBinomial { mean, modes } => {
                mean * (1.0 + mean / modes * (1.0 - x)).powf(-modes - 1.0)
            }
        }
    }

    pub fn prob_zero(&self) -> f64 {
        self.ln_pgf_complement(1.0).exp()
    }

    pub fn prob_positive(&self) -> f64 {
        -self.ln_pgf_complement(1.0).exp_m1()
    }

    /// p(n + 1) / p(n).
    fn ratio(&self, n: u64) -> f64 {
        let n = n as f64;
        match *self {
            CountDistribution::Poisson { mean } => mean / (n + 1.0),
            CountDistribution::NegativeBinomial { mean, modes } => {
                let r = mean / modes;
                r / (1.0 + r) * (n + modes) / (n + 1.0)
            }
        }
    }

    pub fn pmf(&self, n: u64) -> f64 {
        let mut p = self.prob_zero();
        for k in 0..n {
            p *= self.ratio(k);
        }
        p
    }

    /// Draws n conditioned on n ≥ 1.
    pub fn sample_positive<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let p0 = self.prob_zero();
        if p0 < 1e-250 {
            // Vanishing zero class: unconditional draws are already ≥ 1.
            loop {
                let n = self.sample(rng);
                if n > 0 {
                    return n;
                }
            }
        }
        let target = (1.0 - rng.random::<f64>()) * self.prob_positive();
        let mut p = p0 * self.ratio(0);
        let mut cumulative = 0.0;
        let mut n = 1;
        loop {
            cumulative += p;
            if cumulative >= target || n >= MAX_WALK || p == 0.0 && cumulative > 0.0 {
                return n;
            }
            p *= self.ratio(n);
            n += 1;
        }
    }

    /// Unconditional draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let rate = match *self {
            CountDistribution::Poisson { mean } => mean,
            CountDistribution::NegativeBinomial { mean, modes } => {
                Gamma::new(modes, mean / modes).expect("valid gamma").sample(rng)
            }
        };
        if rate <= 0.0 {
            return 0;
        }
        Poisson::new(rate).expect("valid poisson").sample(rng) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pmf_sums_to_one_and_matches_mean() {
        for d in [
            CountDistribution::Poisson { mean: 0.7 },
            CountDistribution::thermal(0.3),
            CountDistribution::NegativeBinomial { mean: 1.2, modes: 15.0 },
        ] {
            let total: f64 = (0..200).map(|n| d.pmf(n)).sum();
            let mean: f64 = (0..200).map(|n| n as f64 * d.pmf(n)).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!((mean - d.mean()).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_pmf_closed_form() {
        let mu = 0.25;
        let d = CountDistribution::thermal(mu);
        for n in 0..10 {
            let exact = mu.powi(n as i32) / (1.0 + mu).powi(n as i32 + 1);
            assert!((d.pmf(n) - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn pgf_and_derivative() {
        let d = CountDistribution::NegativeBinomial { mean: 0.8, modes: 3.0 };
        let x: f64 = 0.37;
        let direct: f64 = (0..300).map(|n| d.pmf(n) * x.powi(n as i32)).sum();
        let deriv: f64 = (1..300).map(|n| n as f64 * d.pmf(n) * x.powi(n as i32 - 1)).sum();
        assert!((d.pgf(x) - direct).abs() < 1e-13);
        assert!((d.pgf_derivative(x) - deriv).abs() < 1e-13);
    }

    #[test]
    fn conditional_sampling_matches_truncated_pmf() {
        let d = CountDistribution::thermal(0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let mut hist = [0u64; 6];
        for _ in 0..n {
            let k = d.sample_positive(&mut rng);
            assert!(k >= 1);
            if k < 6 {
                hist[k as usize] += 1;
            }
        }
        let norm = d.prob_positive();
        for k in 1..4 {
            let expected = d.pmf(k as u64) / norm * n as f64;
            let sigma = expected.sqrt();
            assert!((hist[k] as f64 - expected).abs() < 5.0 * sigma, "k={k}");
        }
    }

    #[test]
    fn large_mean_falls_back_to_direct_sampling() {
        let d = CountDistribution::Poisson { mean: 800.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = d.sample_positive(&mut rng);
        assert!(k > 600 && k < 1000);
    }
}
