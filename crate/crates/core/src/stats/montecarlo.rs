//! Pulse-by-pulse Monte Carlo of the heralded source and HBT detection.
//!
//! Per pulse: n pairs are drawn from the pair statistics; the idler arm
//! clicks if any of the n idler photons is detected or on a dark count;
//! each signal photon reaches the beam splitter with the source's signal
//! detection probability; noise photons are added; everything at the beam
//! splitter is split 50:50 onto two click detectors, each of which also
//! fires on its own dark counts.
//!
//! Pulses where nothing happens leave no trace, so the sampler jumps
//! between pulses that carry at least one pair, noise photon or dark count.
//! Each of those five sources is an independent Bernoulli process over
//! pulses; gaps are drawn geometrically and the value at an occupied pulse
//! is drawn conditioned on being non-zero. This is the same distribution as
//! drawing every pulse.
//!
//! Reproducibility: the pulse range is cut into fixed partitions of
//! [`PARTITION_PULSES`]. Partition `k` draws from ChaCha8 seeded with `seed`
//! on stream `k`. Partitions run in parallel; their tallies are summed, so
//! the result depends only on `(model, n_pulses, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::counts::CountsSummary;
use super::distribution::CountDistribution;
use super::source::SourceModel;
use crate::error::{Error, Result};

pub const PARTITION_PULSES: u64 = 1 << 26;

/// Simulates `n_pulses` laser pulses.
pub fn simulate_pulses(model: &SourceModel, n_pulses: u64, seed: u64) -> Result<CountsSummary> {
    model.validate()?;
    if n_pulses == 0 {
        return Err(Error::domain("n_pulses", "must be at least 1"));
    }
    let partitions = n_pulses.div_ceil(PARTITION_PULSES);
    let sampler = Sampler::new(model);
    let total = (0..partitions)
        .into_par_iter()
        .map(|k| {
            let len = PARTITION_PULSES.min(n_pulses - k * PARTITION_PULSES);
            sampler.run_partition(len, seed, k)
        })
        .reduce(CountsSummary::default, |a, b| a + b);
    debug_assert!(total.is_consistent());
    Ok(total)
}

/// Runs a single partition. `simulate_pulses` is the sum of these over
/// `k = 0..ceil(n_pulses / PARTITION_PULSES)`.
pub fn simulate_partition(model: &SourceModel, pulses: u64, seed: u64, partition: u64) -> Result<CountsSummary> {
    model.validate()?;
    Ok(Sampler::new(model).run_partition(pulses, seed, partition))
}

const PAIRS: usize = 0;
const NOISE: usize = 1;
const DARK_IDLER: usize = 2;
const DARK_1: usize = 3;
const DARK_2: usize = 4;

struct Sampler {
    pairs: CountDistribution,
    noise: CountDistribution,
    /// Per-pulse occupation probability of each event source.
    occupancy: [f64; 5],
    idler_efficiency: f64,
    signal_probability: f64,
}

impl Sampler {
    fn new(model: &SourceModel) -> Self {
        let pairs = model.pair_distribution();
        let noise = model.noise_distribution();
        let d = model.dark_count_prob;
        Self {
            occupancy: [pairs.prob_positive(), noise.prob_positive(), d, d, d],
            pairs,
            noise,
            idler_efficiency: model.idler_efficiency,
            signal_probability: model.signal_detection_probability(),
        }
    }

    fn run_partition(&self, pulses: u64, seed: u64, partition: u64) -> CountsSummary {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(partition);

        let mut counts = CountsSummary {
            n_pulses: pulses,
            ..Default::default()
        };
        let mut next = [0u64; 5];
        for (slot, &p) in next.iter_mut().zip(&self.occupancy) {
            *slot = geometric_gap(&mut rng, p);
        }
        loop {
            let pulse = *next.iter().min().expect("five sources");
            if pulse >= pulses {
                break;
            }
            let mut hit = [false; 5];
            for (i, slot) in next.iter_mut().enumerate() {
                if *slot == pulse {
                    hit[i] = true;
                    *slot = pulse.saturating_add(1).saturating_add(geometric_gap(&mut rng, self.occupancy[i]));
                }
            }
            let n = if hit[PAIRS] { self.pairs.sample_positive(&mut rng) } else { 0 };
            let k = if hit[NOISE] { self.noise.sample_positive(&mut rng) } else { 0 };

            let idler = hit[DARK_IDLER] || n > 0 && rng.random::<f64>() < herald_probability(self.idler_efficiency, n);
            let signal = binomial(&mut rng, n, self.signal_probability);
            let at_splitter = signal + k;
            let to_first = binomial(&mut rng, at_splitter, 0.5);
            let click1 = hit[DARK_1] || to_first > 0;
            let click2 = hit[DARK_2] || at_splitter > to_first;
            counts.record(idler, click1, click2);
        }
        counts
    }
}

/// 1 − (1 − η)ⁿ
fn herald_probability(efficiency: f64, n: u64) -> f64 {
    -((n as f64) * (-efficiency).ln_1p()).exp_m1()
}

/// Pulses skipped before the next occupied one.
fn geometric_gap<R: Rng>(rng: &mut R, p: f64) -> u64 {
    if p <= 0.0 {
        return u64::MAX;
    }
    if p >= 1.0 {
        return 0;
    }
    let u = 1.0 - rng.random::<f64>();
    let gap = u.ln() / (-p).ln_1p();
    if gap >= u64::MAX as f64 {
        u64::MAX
    } else {
        gap as u64
    }
}

fn binomial<R: Rng>(rng: &mut R, n: u64, p: f64) -> u64 {
    match n {
        0 => 0,
        1..=16 => (0..n).filter(|_| rng.random::<f64>() < p).count() as u64,
        _ => Binomial::new(n, p).expect("valid binomial").sample(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::source::{NoiseStatistics, PairStatistics};

    fn ideal(mean_pairs: f64) -> SourceModel {
        SourceModel {
            mean_pairs,
            idler_efficiency: 1.0,
            signal_transmission: 1.0,
            dark_count_prob: 0.0,
            analyzer_extinction: 0.0,
            ..SourceModel::uncalibrated()
        }
    }

    #[test]
    fn empty_model_counts_nothing() {
        let c = simulate_pulses(&ideal(0.0), 1_000_000, 1).unwrap();
        assert_eq!(
            c,
            CountsSummary {
                n_pulses: 1_000_000,
                ..Default::default()
            }
        );
    }

    #[test]
    fn single_photons_never_split() {
        let mut m = ideal(1e-4);
        m.pair_statistics = PairStatistics::Poissonian;
        let c = simulate_pulses(&m, 10_000_000, 3).unwrap();
        assert!(c.idler_clicks > 500);
        // P(n ≥ 2) ≈ μ²/2 = 5e-9 per pulse: expect ~0.05 events here.
        assert_eq!(c.three_fold_12i, 0);
    }

    #[test]
    fn deterministic_for_seed() {
        let m = SourceModel {
            noise_mean: 0.01,
            ..ideal(0.02)
        };
        let a = simulate_pulses(&m, 3_000_000, 99).unwrap();
        let b = simulate_pulses(&m, 3_000_000, 99).unwrap();
        let c = simulate_pulses(&m, 3_000_000, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn partitions_sum_to_run() {
        let m = SourceModel {
            noise_mean: 0.003,
            ..ideal(0.01)
        };
        let n = 2 * PARTITION_PULSES + 12_345;
        let whole = simulate_pulses(&m, n, 5).unwrap();
        let parts = simulate_partition(&m, PARTITION_PULSES, 5, 0).unwrap()
            + simulate_partition(&m, PARTITION_PULSES, 5, 1).unwrap()
            + simulate_partition(&m, 12_345, 5, 2).unwrap();
        assert_eq!(whole, parts);
    }

    #[test]
    fn rates_match_expectation() {
        let m = SourceModel {
            mean_pairs: 0.05,
            idler_efficiency: 0.3,
            signal_transmission: 0.4,
            noise_mean: 0.02,
            noise_statistics: NoiseStatistics::Thermal { modes: 3 },
            dark_count_prob: 1e-3,
            ..SourceModel::uncalibrated()
        };
        let n = 5_000_000u64;
        let c = simulate_pulses(&m, n, 11).unwrap();
        let p = crate::stats::analytic::click_probabilities(&m);
        for (observed, prob) in [
            (c.idler_clicks, p.herald),
            (c.signal1_clicks, p.signal1),
            (c.two_fold_1i, p.herald_signal1),
            (c.two_fold_2i, p.herald_signal2),
            (c.three_fold_12i, p.herald_both),
        ] {
            let expected = prob * n as f64;
            assert!(
                (observed as f64 - expected).abs() < 5.0 * expected.sqrt(),
                "observed {observed}, expected {expected}"
            );
        }
    }

    #[test]
    fn rejects_zero_pulses_and_bad_models() {
        assert!(simulate_pulses(&ideal(0.1), 0, 1).is_err());
        let bad = SourceModel {
            idler_efficiency: 2.0,
            ..ideal(0.1)
        };
        assert!(simulate_pulses(&bad, 10, 1).is_err());
    }

    #[test]
    fn geometric_gap_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(geometric_gap(&mut rng, 0.0), u64::MAX);
        assert_eq!(geometric_gap(&mut rng, 1.0), 0);
        let mean = (0..100_000).map(|_| geometric_gap(&mut rng, 0.01) as f64).sum::<f64>() / 1e5;
        assert!((mean - 99.0).abs() < 2.0);
    }
}
