//! Checks the closed-form branch weights against both dynamics oracles.

use serde::Serialize;

use crate::cascade::{amplitudes, Amplitudes, DecayParams, BETA_INDEX, GAMMA_INDEX};
use crate::error::{Error, Result};
use crate::oracle::{monte_carlo_patterns, rate_equation_populations, PatternCounts};

/// Largest RK4 deviation accepted.
pub const RK4_TOLERANCE: f64 = 1e-6;
/// Largest pattern z-score accepted.
pub const Z_LIMIT: f64 = 5.0;
/// Preferred RK4 step; shortened for small delays.
pub const RK4_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternCheck {
    /// Basis index, big-endian over (EB, EX, LB, LX).
    pub pattern: usize,
    pub count: u64,
    pub expected: f64,
    pub frequency: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub gamma_b: f64,
    pub gamma_x: f64,
    pub delta_t: f64,
    pub trials: u64,
    pub seed: u64,
    pub rk4_step: f64,
    pub rk4_max_deviation: f64,
    pub patterns: Vec<PatternCheck>,
    /// Trials that landed outside {0000, 1001, 1111}.
    pub off_support: u64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn max_abs_z(&self) -> f64 {
        self.patterns.iter().map(|c| c.z.abs()).fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "params: gamma_b={} gamma_x={} dt={}\n",
            self.gamma_b, self.gamma_x, self.delta_t
        );
        s += &format!(
            "rk4: step={:e} max_deviation={:.3e} (limit {:e})\n",
            self.rk4_step, self.rk4_max_deviation, RK4_TOLERANCE
        );
        s += &format!("monte carlo: trials={} seed={}\n", self.trials, self.seed);
        for c in &self.patterns {
            s += &format!(
                "  pattern {:04b}: count={} freq={:.6} expected={:.6} z={:+.3}\n",
                c.pattern, c.count, c.frequency, c.expected, c.z
            );
        }
        s += &format!("  off-support trials: {}\n", self.off_support);
        s += if self.passed { "PASS\n" } else { "FAIL\n" };
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Binomial z-score of `count` successes out of `trials` against probability `p`.
fn z_score(count: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let diff = count as f64 - n * p;
    let var = n * p * (1.0 - p);
    if var > 0.0 {
        diff / var.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

pub fn validate_oracles(p: &DecayParams, trials: u64, seed: u64) -> Result<ValidationReport> {
    validate_against(p, &amplitudes(p), trials, seed)
}

/// Like [`validate_oracles`] but compares the oracles with `expected` instead
/// of the closed form. Used to confirm that a wrong amplitude is caught.
pub fn validate_against(
    p: &DecayParams,
    expected: &Amplitudes,
    trials: u64,
    seed: u64,
) -> Result<ValidationReport> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let dt = p.delta_t();
    let rk4_step = if dt > 0.0 {
        RK4_STEP.min(dt / 10.0)
    } else {
        RK4_STEP
    };
    let pops = rate_equation_populations(p, rk4_step)?;
    let rk4_max_deviation = pops.max_deviation(expected);

    let counts: PatternCounts = monte_carlo_patterns(p, trials, seed)?;
    let [a2, b2, g2] = expected.probabilities();
    let patterns: Vec<PatternCheck> = [(0, a2), (BETA_INDEX, b2), (GAMMA_INDEX, g2)]
        .into_iter()
        .map(|(pattern, prob)| {
            let count = counts.count(pattern);
            PatternCheck {
                pattern,
                count,
                expected: prob,
                frequency: counts.frequency(pattern),
                z: z_score(count, trials, prob),
            }
        })
        .collect();
    let off_support = counts.off_support();

    let passed = rk4_max_deviation <= RK4_TOLERANCE
        && off_support == 0
        && patterns.iter().all(|c| c.z.abs() <= Z_LIMIT);
    Ok(ValidationReport {
        gamma_b: p.gamma_b(),
        gamma_x: p.gamma_x(),
        delta_t: dt,
        trials,
        seed,
        rk4_step,
        rk4_max_deviation,
        patterns,
        off_support,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn reference() -> DecayParams {
        DecayParams::new(2.0, 1.0, LN_2 / 2.0).unwrap()
    }

    #[test]
    fn reference_point_passes() {
        let r = validate_oracles(&reference(), 200_000, 7).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert!(r.rk4_max_deviation < 1e-8);
        assert_eq!(r.off_support, 0);
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(validate_oracles(&reference(), 0, 1), Err(Error::ZeroTrials));
    }

    #[test]
    fn corrupted_amplitude_fails() {
        let good = amplitudes(&reference());
        let [a2, b2, g2] = good.probabilities();
        let bad = Amplitudes::from_probabilities(a2 + 0.01, b2 - 0.01, g2);
        let r = validate_against(&reference(), &bad, 1_000_000, 3).unwrap();
        assert!(!r.passed);
        assert!(r.max_abs_z() > Z_LIMIT);
    }

    #[test]
    fn zero_delay_uses_default_step() {
        let p = DecayParams::new(2.0, 1.0, 0.0).unwrap();
        let r = validate_oracles(&p, 1000, 1).unwrap();
        assert_eq!(r.rk4_step, RK4_STEP);
        assert!(r.passed);
        assert_eq!(r.patterns[0].count, 1000);
    }

    #[test]
    fn z_score_edges() {
        assert_eq!(z_score(0, 10, 0.0), 0.0);
        assert_eq!(z_score(1, 10, 0.0), f64::INFINITY);
        assert!((z_score(60, 100, 0.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn report_renders() {
        let r = validate_oracles(&reference(), 1000, 1).unwrap();
        assert!(r.to_text().contains("pattern 1001"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["trials"], 1000);
    }
}
