use std::f64::consts::PI;

use kerrsim_core::shutter::{
    energy_scan, jones_switching_probability, nonlinear_phase, switching_efficiency, total_response, ShutterConfig,
};
use kerrsim_core::stats::{
    click_probabilities, expected_g2_mixture, heralded_g2, simulate_pulses, NoiseStatistics, PairStatistics,
    SourceModel,
};
use proptest::prelude::*;

fn calibrated() -> ShutterConfig {
    ShutterConfig::default().calibrated(3e-9, PI).unwrap()
}

#[test]
fn jones_calculus_matches_closed_form() {
    for i in 0..20 {
        let theta = 90.0 * i as f64 / 19.0;
        for j in 0..20 {
            let phase = 2.0 * PI * j as f64 / 19.0;
            for pump_angle in [0.0, 30.0, 90.0] {
                let jones = jones_switching_probability(theta, phase, pump_angle);
                let closed = switching_efficiency(theta, phase);
                assert!((jones - closed).abs() < 1e-12, "θ={theta} φ={phase}: {jones} vs {closed}");
            }
        }
    }
}

#[test]
fn peak_efficiency_rises_with_energy_up_to_pi() {
    let config = calibrated();
    let mut last = -1.0;
    for k in 0..=12 {
        let energy = 3e-9 * k as f64 / 12.0;
        let eta = total_response(&config.clone().with_pump_energy(energy), &[0.0]).unwrap().efficiency[0];
        assert!(eta >= last - 1e-12, "E={energy}: {eta} < {last}");
        last = eta;
    }
}

#[test]
fn energy_scan_is_sin_squared_in_kappa() {
    let config = calibrated().ideal();
    let energies: Vec<f64> = (0..=30).map(|k| 1e-10 * k as f64).collect();
    let scan = energy_scan(&config, &energies, 0.0).unwrap();
    assert!((scan.kappa * 3e-9 - PI).abs() < 1e-9);
    for (e, eta) in energies.iter().zip(&scan.efficiency) {
        let model = (0.5 * scan.kappa * e).sin().powi(2);
        assert!((eta - model).abs() < 1e-9, "E={e}: {eta} vs {model}");
    }
}

fn consistency_model(mean_pairs: f64, thermal_noise: bool) -> SourceModel {
    SourceModel {
        mean_pairs,
        pair_statistics: if thermal_noise { PairStatistics::TwoModeSqueezed } else { PairStatistics::Poissonian },
        idler_efficiency: 0.4,
        signal_transmission: 0.5,
        noise_mean: 0.01,
        noise_statistics: if thermal_noise {
            NoiseStatistics::Thermal { modes: 2 }
        } else {
            NoiseStatistics::Poissonian
        },
        dark_count_prob: 1e-4,
        ..SourceModel::uncalibrated()
    }
}

#[test]
fn monte_carlo_g2_converges_to_exact_expectation() {
    for (mu, thermal, seed) in [(0.1, true, 1), (0.05, false, 2), (0.02, true, 3)] {
        let model = consistency_model(mu, thermal);
        let counts = simulate_pulses(&model, 10_000_000, seed).unwrap();
        let g2 = heralded_g2(&counts).unwrap();
        let expected = click_probabilities(&model).heralded_g2();
        assert!(
            (g2.value - expected).abs() < 3.0 * g2.std_error,
            "μ={mu}: {} ± {} vs {expected}",
            g2.value,
            g2.std_error
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn phase_is_linear_in_pump_energy(delay_ps in -1.5..1.5_f64, e in 0.1e-9..5e-9_f64, k in 0.1..4.0_f64) {
        let config = calibrated();
        let a = nonlinear_phase(&config.clone().with_pump_energy(e), delay_ps * 1e-12).unwrap();
        let b = nonlinear_phase(&config.clone().with_pump_energy(k * e), delay_ps * 1e-12).unwrap();
        prop_assert!((b - k * a).abs() <= 1e-8 * b.abs().max(1e-12));
    }

    #[test]
    fn mixture_endpoints_are_exact(rate in 1e-9..1e3_f64, gi in 0.0..2.0_f64, gn in 0.0..3.0_f64) {
        prop_assert_eq!(expected_g2_mixture(rate, 0.0, gi, gn).unwrap(), gi);
        prop_assert_eq!(expected_g2_mixture(0.0, rate, gi, gn).unwrap(), gn);
    }

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), mu in 0.0..0.1_f64) {
        let model = consistency_model(mu, true);
        let a = simulate_pulses(&model, 200_000, seed).unwrap();
        let b = simulate_pulses(&model, 200_000, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.is_consistent());
    }
}
