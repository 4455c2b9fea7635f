//! States produced by two π-pulses on a biexciton–exciton cascade.
//!
//! The dot starts in `|B⟩` and decays `B → X → g` during the early window.
//! A second π-pulse at `Δt` swaps `g ↔ B` (X is off resonance), after which
//! every branch finishes its cascade into the late modes. The photonic state
//! lives on four two-level modes ordered as [`ModeLabel`] (big-endian), so the
//! three branches land on basis indices 0 (`|0000⟩`), 9 (`|1001⟩`) and 15
//! (`|1111⟩`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix, StateVector, SubsystemShape};

/// Dimension of the emitter (g, X, B).
pub const EMITTER_DIM: usize = 3;
pub const LEVEL_G: usize = 0;
pub const LEVEL_X: usize = 1;
pub const LEVEL_B: usize = 2;

/// Number of photonic modes.
pub const MODE_COUNT: usize = 4;
/// Basis index of `|1_B 0_X⟩_e |0_B 1_X⟩_l`.
pub const BETA_INDEX: usize = 9;
/// Basis index of `|1111⟩`.
pub const GAMMA_INDEX: usize = 15;

/// Relative rate gap below which β² uses the degenerate limit `Γ_BΔt·e^{−Γ_BΔt}`.
pub const DEGENERATE_RATE_GAP: f64 = 1e-9;

/// Decay rates of the biexciton and exciton and the delay between pulses.
///
/// All three share one time unit; only the products `ΓΔt` matter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    gamma_b: f64,
    gamma_x: f64,
    delta_t: f64,
}

impl DecayParams {
    pub fn new(gamma_b: f64, gamma_x: f64, delta_t: f64) -> Result<Self> {
        if !(gamma_b > 0.0 && gamma_b.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gamma_B must be positive, got {gamma_b}"
            )));
        }
        if !(gamma_x > 0.0 && gamma_x.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gamma_X must be positive, got {gamma_x}"
            )));
        }
        if !(delta_t >= 0.0 && delta_t.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "delta_t must be non-negative, got {delta_t}"
            )));
        }
        Ok(Self {
            gamma_b,
            gamma_x,
            delta_t,
        })
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }

    pub fn gamma_x(&self) -> f64 {
        self.gamma_x
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Same rates, different delay.
    pub fn with_delta_t(&self, delta_t: f64) -> Result<Self> {
        Self::new(self.gamma_b, self.gamma_x, delta_t)
    }
}

/// Real, non-negative branch amplitudes with `α² + β² + γ² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Amplitudes {
    /// Builds amplitudes from branch probabilities, renormalizing them.
    pub fn from_probabilities(alpha2: f64, beta2: f64, gamma2: f64) -> Self {
        let total = alpha2 + beta2 + gamma2;
        Self {
            alpha: (alpha2 / total).max(0.0).sqrt(),
            beta: (beta2 / total).max(0.0).sqrt(),
            gamma: (gamma2 / total).max(0.0).sqrt(),
        }
    }

    /// `(α², β², γ²)`
    pub fn probabilities(&self) -> [f64; 3] {
        [
            self.alpha * self.alpha,
            self.beta * self.beta,
            self.gamma * self.gamma,
        ]
    }
}

/// One of the four photonic modes, in basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeLabel {
    EarlyB,
    EarlyX,
    LateB,
    LateX,
}

impl ModeLabel {
    pub const ALL: [ModeLabel; MODE_COUNT] = [
        ModeLabel::EarlyB,
        ModeLabel::EarlyX,
        ModeLabel::LateB,
        ModeLabel::LateX,
    ];

    /// Position of this mode in the tensor product (0 = most significant).
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn from_ordinal(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Two-letter tag used in table headers: `EB`, `EX`, `LB`, `LX`.
    pub fn short(self) -> &'static str {
        match self {
            ModeLabel::EarlyB => "EB",
            ModeLabel::EarlyX => "EX",
            ModeLabel::LateB => "LB",
            ModeLabel::LateX => "LX",
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModeLabel::EarlyB => "EarlyB",
            ModeLabel::EarlyX => "EarlyX",
            ModeLabel::LateB => "LateB",
            ModeLabel::LateX => "LateX",
        };
        f.write_str(name)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Accepts `EarlyB`, `early-b`, `early_b`, `EB` and friends, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "earlyb" | "eb" => Ok(ModeLabel::EarlyB),
            "earlyx" | "ex" => Ok(ModeLabel::EarlyX),
            "lateb" | "lb" => Ok(ModeLabel::LateB),
            "latex" | "lx" => Ok(ModeLabel::LateX),
            _ => Err(Error::UnknownMode(s.to_string())),
        }
    }
}

/// Branch amplitudes after the early decay window.
pub fn amplitudes(p: &DecayParams) -> Amplitudes {
    let (gb, gx, dt) = (p.gamma_b, p.gamma_x, p.delta_t);
    let alpha2 = (-gb * dt).exp();
    let (slow, fast) = if gb < gx { (gb, gx) } else { (gx, gb) };
    let gap = fast - slow;
    let beta2 = if gap < DEGENERATE_RATE_GAP * fast {
        gb * dt * (-gb * dt).exp()
    } else {
        // (e^{−Γ_BΔt} − e^{−Γ_XΔt})/(Γ_X − Γ_B) written without cancellation
        gb * (-slow * dt).exp() * -(-gap * dt).exp_m1() / gap
    };
    let beta2 = beta2.clamp(0.0, 1.0 - alpha2);
    let gamma2 = (1.0 - alpha2 - beta2).max(0.0);
    Amplitudes {
        alpha: (-0.5 * gb * dt).exp(),
        beta: beta2.sqrt(),
        gamma: gamma2.sqrt(),
    }
}

/// Shape `[3, 2, 2]`: emitter ⊗ Early-B ⊗ Early-X.
pub fn early_shape() -> SubsystemShape {
    SubsystemShape::new(vec![EMITTER_DIM, 2, 2])
}

/// `α|B⟩|00⟩ + β|X⟩|10⟩ + γ|g⟩|11⟩` over [`early_shape`].
pub fn early_state(p: &DecayParams) -> StateVector {
    let amps = amplitudes(p);
    let shape = early_shape();
    let mut v = vec![0.0; shape.total_dim()];
    v[shape.index_of(&[LEVEL_B, 0, 0])] = amps.alpha;
    v[shape.index_of(&[LEVEL_X, 1, 0])] = amps.beta;
    v[shape.index_of(&[LEVEL_G, 1, 1])] = amps.gamma;
    StateVector::from_real(&v)
}

/// Instantaneous π-pulse on `g ↔ B`: swaps the g and B amplitudes of every
/// photonic configuration; X amplitudes are untouched.
///
/// The leading factor of `shape` must be the 3-level emitter.
pub fn apply_second_pulse(s: &StateVector, shape: &SubsystemShape) -> Result<StateVector> {
    if shape.dims().first() != Some(&EMITTER_DIM) {
        return Err(Error::InvalidParams(format!(
            "pulse needs a leading 3-level factor, got shape {:?}",
            shape.dims()
        )));
    }
    if shape.total_dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.total_dim(),
            got: s.dim(),
        });
    }
    let block = s.dim() / EMITTER_DIM;
    let mut amps = s.amps().to_vec();
    let (lower, upper) = amps.split_at_mut(LEVEL_B * block);
    lower[LEVEL_G * block..(LEVEL_G + 1) * block].swap_with_slice(&mut upper[..block]);
    Ok(StateVector::new(amps))
}

/// Runs every emitter branch of a post-pulse state to the ground state,
/// writing the late photons: g emits nothing, X emits a late X photon, B
/// emits a late B and a late X photon.
///
/// Input is over [`early_shape`]; output is the four-mode photonic state.
pub fn late_emission(s: &StateVector) -> Result<StateVector> {
    let shape = early_shape();
    if s.dim() != shape.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.total_dim(),
            got: s.dim(),
        });
    }
    let modes = SubsystemShape::qubits(MODE_COUNT);
    let mut out = vec![Complex64::new(0.0, 0.0); modes.total_dim()];
    for (idx, &amp) in s.amps().iter().enumerate() {
        let d = shape.digits(idx);
        let (late_b, late_x) = match d[0] {
            LEVEL_G => (0, 0),
            LEVEL_X => (0, 1),
            _ => (1, 1),
        };
        out[modes.index_of(&[d[1], d[2], late_b, late_x])] += amp;
    }
    Ok(StateVector::new(out))
}

/// `α|0000⟩ + β|1001⟩ + γ|1111⟩`
pub fn final_state(p: &DecayParams) -> StateVector {
    let amps = amplitudes(p);
    let mut v = [0.0; 1 << MODE_COUNT];
    v[0] = amps.alpha;
    v[BETA_INDEX] = amps.beta;
    v[GAMMA_INDEX] = amps.gamma;
    StateVector::from_real(&v)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::GhzTooSmall(n));
    }
    let dim = 1usize << n;
    let mut v = vec![0.0; dim];
    v[0] = std::f64::consts::FRAC_1_SQRT_2;
    v[dim - 1] = std::f64::consts::FRAC_1_SQRT_2;
    Ok(StateVector::from_real(&v))
}

/// `|⟨GHZ|ψ_fin⟩|² = (α + γ)²/2`
pub fn ghz_fidelity(p: &DecayParams) -> f64 {
    let a = amplitudes(p);
    0.5 * (a.alpha + a.gamma).powi(2)
}

/// `|ψ_fin⟩⟨ψ_fin|` with every off-diagonal entry scaled by `d ∈ [0, 1]`.
pub fn dephased_density(p: &DecayParams, d: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidDephasing(d));
    }
    let psi = final_state(p);
    let mut m: ComplexMatrix = psi.projector();
    let n = m.rows();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                m[(r, c)] *= d;
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
