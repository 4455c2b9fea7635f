//! Dynamics oracles for the branch weights, independent of the closed-form
//! amplitudes: a Runge–Kutta integration of the cascade rate equations and a
//! quantum-jump sampler of the full two-pulse protocol.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{Amplitudes, DecayParams, BETA_INDEX, GAMMA_INDEX, MODE_COUNT};
use crate::error::{Error, Result};

/// Level occupations after the early window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Populations {
    pub p_b: f64,
    pub p_x: f64,
    pub p_g: f64,
}

impl Populations {
    /// Largest gap to `(α², β², γ²)`.
    pub fn max_deviation(&self, amps: &Amplitudes) -> f64 {
        let [a2, b2, g2] = amps.probabilities();
        (self.p_b - a2)
            .abs()
            .max((self.p_x - b2).abs())
            .max((self.p_g - g2).abs())
    }
}

/// Integrates `Ṗ_B = −Γ_B P_B`, `Ṗ_X = Γ_B P_B − Γ_X P_X`, `Ṗ_g = Γ_X P_X`
/// from `(1, 0, 0)` to `Δt` with classical RK4.
///
/// `step` is an upper bound; the grid is uniform and ends exactly at `Δt`.
pub fn rate_equation_populations(p: &DecayParams, step: f64) -> Result<Populations> {
    let dt = p.delta_t();
    if !(step > 0.0 && step.is_finite()) || (dt > 0.0 && step > dt / 10.0) {
        return Err(Error::InvalidStep(step));
    }
    let (gb, gx) = (p.gamma_b(), p.gamma_x());
    let deriv = |y: [f64; 3]| [-gb * y[0], gb * y[0] - gx * y[1], gx * y[1]];
    let axpy =
        |y: [f64; 3], k: [f64; 3], h: f64| [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]];

    let n = (dt / step).ceil() as usize;
    let mut y = [1.0, 0.0, 0.0];
    if n > 0 {
        let h = dt / n as f64;
        for _ in 0..n {
            let k1 = deriv(y);
            let k2 = deriv(axpy(y, k1, h / 2.0));
            let k3 = deriv(axpy(y, k2, h / 2.0));
            let k4 = deriv(axpy(y, k3, h));
            for i in 0..3 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    Ok(Populations {
        p_b: y[0],
        p_x: y[1],
        p_g: y[2],
    })
}

/// Photon-occupation patterns of sampled trajectories.
///
/// Pattern bits are big-endian over (EarlyB, EarlyX, LateB, LateX), matching
/// the basis index of the four-mode state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternCounts {
    counts: [u64; 1 << MODE_COUNT],
    trials: u64,
}

impl PatternCounts {
    fn empty() -> Self {
        Self {
            counts: [0; 1 << MODE_COUNT],
            trials: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.trials += other.trials;
        self
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn count(&self, pattern: usize) -> u64 {
        self.counts[pattern]
    }

    pub fn counts(&self) -> &[u64; 1 << MODE_COUNT] {
        &self.counts
    }

    pub fn frequency(&self, pattern: usize) -> f64 {
        self.counts[pattern] as f64 / self.trials as f64
    }

    /// Patterns observed at least once, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len())
            .filter(|&i| self.counts[i] > 0)
            .collect()
    }

    /// Trials that ended outside `{0000, 1001, 1111}`.
    pub fn off_support(&self) -> u64 {
        self.trials - self.counts[0] - self.counts[BETA_INDEX] - self.counts[GAMMA_INDEX]
    }
}

/// Trials per independent RNG stream.
pub const MC_BLOCK: u64 = 1 << 15;

/// Samples `trials` trajectories of the two-pulse protocol.
///
/// Each trajectory starts in B at t = 0, draws exponential waiting times
/// (Γ_B for B → X, Γ_X for X → g), labels each photon early (t < Δt) or
/// late, swaps g ↔ B at exactly Δt and runs until the emitter rests in g
/// after the pulse. Trials are split into blocks of [`MC_BLOCK`]; block `b`
/// draws from ChaCha8 stream `b` under a key expanded from `seed` with
/// splitmix64, so the result depends only on `(p, trials, seed)` and not on
/// how blocks are scheduled across threads.
pub fn monte_carlo_patterns(p: &DecayParams, trials: u64, seed: u64) -> Result<PatternCounts> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let key = expand_seed(seed);
    let blocks = trials.div_ceil(MC_BLOCK);
    Ok((0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = MC_BLOCK.min(trials - b * MC_BLOCK);
            run_block(p, key, b, n)
        })
        .reduce(PatternCounts::empty, PatternCounts::merge))
}

/// [`monte_carlo_patterns`] on a dedicated pool of `workers` threads.
pub fn monte_carlo_patterns_with_workers(
    p: &DecayParams,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<PatternCounts> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| monte_carlo_patterns(p, trials, seed))
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

fn run_block(p: &DecayParams, key: [u8; 32], block: u64, n: u64) -> PatternCounts {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(block);
    let mut out = PatternCounts::empty();
    for _ in 0..n {
        out.counts[sample_trajectory(p, &mut rng)] += 1;
    }
    out.trials = n;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    G,
    X,
    B,
}

const EARLY_B: usize = 0b1000;
const EARLY_X: usize = 0b0100;
const LATE_B: usize = 0b0010;
const LATE_X: usize = 0b0001;

fn sample_trajectory<R: Rng>(p: &DecayParams, rng: &mut R) -> usize {
    let dt = p.delta_t();
    let mut level = Level::B;
    let mut t = 0.0;
    let mut pulsed = false;
    let mut pattern = 0;
    loop {
        let rate = match level {
            Level::B => p.gamma_b(),
            Level::X => p.gamma_x(),
            Level::G if pulsed => break,
            Level::G => {
                t = dt;
                pulsed = true;
                level = Level::B;
                continue;
            }
        };
        let u: f64 = rng.sample(Open01);
        let wait = -u.ln() / rate;
        if !pulsed && t + wait >= dt {
            // the pulse interrupts; waiting times are memoryless so the
            // next decay is redrawn from Δt
            t = dt;
            pulsed = true;
            if level == Level::B {
                level = Level::G;
            }
            continue;
        }
        t += wait;
        let (early_bit, late_bit, next) = match level {
            Level::B => (EARLY_B, LATE_B, Level::X),
            _ => (EARLY_X, LATE_X, Level::G),
        };
        pattern |= if pulsed { late_bit } else { early_bit };
        level = next;
    }
    pattern
}
