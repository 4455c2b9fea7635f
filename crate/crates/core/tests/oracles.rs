use std::f64::consts::LN_2;

use cascade_core::cascade::{BETA_INDEX, GAMMA_INDEX};
use cascade_core::{amplitudes, monte_carlo_patterns, rate_equation_populations, DecayParams};

#[test]
fn rk4_matches_closed_form_across_ratios() {
    for ratio in [0.5, 1.0, 2.0, 10.0] {
        for gb_dt in [0.05, LN_2, 2.0, 6.0] {
            let p = DecayParams::new(ratio, 1.0, gb_dt / ratio).unwrap();
            let pops = rate_equation_populations(&p, 1e-4_f64.min(p.delta_t() / 10.0)).unwrap();
            let dev = pops.max_deviation(&amplitudes(&p));
            assert!(dev < 1e-8, "ratio={ratio} gb_dt={gb_dt}: {dev}");
        }
    }
}

#[test]
fn rk4_degenerate_limit() {
    let p = DecayParams::new(1.0, 1.0, 1.0).unwrap();
    let pops = rate_equation_populations(&p, 1e-4).unwrap();
    assert!((pops.p_x - (-1.0f64).exp()).abs() < 1e-8);
}

#[test]
fn rk4_rejects_coarse_steps() {
    let p = DecayParams::new(2.0, 1.0, 1.0).unwrap();
    assert!(rate_equation_populations(&p, 0.2).is_err());
    assert!(rate_equation_populations(&p, 0.0).is_err());
    assert!(rate_equation_populations(&p, f64::NAN).is_err());
}

#[test]
fn sampler_frequencies_within_four_sigma() {
    const TRIALS: u64 = 1_000_000;
    for (ratio, seed) in [(0.5, 11), (2.0, 12), (10.0, 13)] {
        let p = DecayParams::new(ratio, 1.0, LN_2 / ratio).unwrap();
        let counts = monte_carlo_patterns(&p, TRIALS, seed).unwrap();
        assert_eq!(counts.off_support(), 0);
        let probs = amplitudes(&p).probabilities();
        for (pattern, prob) in [0, BETA_INDEX, GAMMA_INDEX].into_iter().zip(probs) {
            let sigma = (TRIALS as f64 * prob * (1.0 - prob)).sqrt();
            let z = (counts.count(pattern) as f64 - TRIALS as f64 * prob) / sigma;
            assert!(z.abs() < 4.0, "ratio={ratio} pattern={pattern:04b}: z={z}");
        }
    }
}

#[test]
fn sampler_is_seed_deterministic() {
    let p = DecayParams::new(2.0, 1.0, 0.4).unwrap();
    let a = monte_carlo_patterns(&p, 100_000, 99).unwrap();
    let b = monte_carlo_patterns(&p, 100_000, 99).unwrap();
    let c = monte_carlo_patterns(&p, 100_000, 100).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn sampler_rejects_zero_trials() {
    let p = DecayParams::new(2.0, 1.0, 0.4).unwrap();
    assert!(monte_carlo_patterns(&p, 0, 1).is_err());
}
