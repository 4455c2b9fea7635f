//! Secret-communication rates: conditional mutual information of the cascade
//! state against its GHZ counterpart, and the delay that maximizes it.

use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{ghz_state, DecayParams};
use crate::entanglement::{conditional_mutual_information, EveSplit};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;
use crate::sweep::{grid, state_for, Scale};

/// Points of the coarse scan that precedes golden-section refinement.
pub const COARSE_POINTS: usize = 64;
/// Final bracket width relative to the initial bracket.
pub const DELAY_XTOL_REL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecureRate {
    /// `I(Alice:Bob|Eve)` of the (optionally dephased) cascade state.
    pub cmi: f64,
    /// The same quantity for the four-mode GHZ state.
    pub ghz_baseline: f64,
}

/// `I(Alice:Bob|Eve)` for a four-mode GHZ state.
pub fn ghz_baseline(split: &EveSplit) -> Result<f64> {
    let rho = DensityMatrix::from_pure(&ghz_state(4)?)?;
    conditional_mutual_information(&rho, split)
}

pub fn secure_rate(p: &DecayParams, split: &EveSplit, dephase: Option<f64>) -> Result<SecureRate> {
    let rho = state_for(p, dephase, false)?;
    Ok(SecureRate {
        cmi: conditional_mutual_information(&rho, split)?,
        ghz_baseline: ghz_baseline(split)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayOptimum {
    pub dt: f64,
    pub value: f64,
}

/// Maximizes `objective` over `[lo, hi]`.
///
/// A [`COARSE_POINTS`] uniform scan picks the best cell pair, which is then
/// narrowed by golden-section search to a width of `DELAY_XTOL_REL·(hi−lo)`.
/// Returns the midpoint of the final interval, or the best scan point if
/// that scored higher.
pub fn maximize_on_bracket<F>(objective: F, lo: f64, hi: f64) -> Result<DelayOptimum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::EmptyBracket(lo, hi));
    }
    let xs = grid(lo, hi, COARSE_POINTS, Scale::Linear);
    let fs = xs
        .par_iter()
        .map(|&x| objective(x))
        .collect::<Result<Vec<f64>>>()?;
    let best = (0..fs.len()).fold(0, |b, i| if fs[i] > fs[b] { i } else { b });

    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(xs.len() - 1)];
    let xtol = DELAY_XTOL_REL * (hi - lo);

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    while b - a > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let f_mid = objective(mid)?;
    if fs[best] > f_mid {
        Ok(DelayOptimum {
            dt: xs[best],
            value: fs[best],
        })
    } else {
        Ok(DelayOptimum {
            dt: mid,
            value: f_mid,
        })
    }
}

/// Delay in `[dt_lo, dt_hi]` maximizing the conditional mutual information
/// of the cascade state for `split`.
pub fn optimize_delay(
    gamma_b: f64,
    gamma_x: f64,
    split: &EveSplit,
    bracket: (f64, f64),
    dephase: Option<f64>,
) -> Result<DelayOptimum> {
    let (lo, hi) = bracket;
    if lo.is_nan() || lo < 0.0 {
        return Err(Error::EmptyBracket(lo, hi));
    }
    DecayParams::new(gamma_b, gamma_x, lo)?;
    maximize_on_bracket(
        |dt| {
            let p = DecayParams::new(gamma_b, gamma_x, dt)?;
            secure_rate_cmi(&p, split, dephase)
        },
        lo,
        hi,
    )
}

fn secure_rate_cmi(p: &DecayParams, split: &EveSplit, dephase: Option<f64>) -> Result<f64> {
    conditional_mutual_information(&state_for(p, dephase, false)?, split)
}
