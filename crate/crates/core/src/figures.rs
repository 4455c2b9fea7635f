//! Figure data: per-channel mutual information and secret rates against
//! `Γ_XΔt` at `Γ_B/Γ_X = 2`.
//!
//! Both tables use 200 log-spaced points on `Γ_XΔt ∈ [1e-2, 10]`, a range
//! that covers the secret-rate optimum near `Γ_XΔt ≈ 1/3` and the decay of
//! all correlations at long delays.

use std::path::Path;

use rayon::prelude::*;

use crate::cascade::{ghz_state, DecayParams, ModeLabel};
use crate::entanglement::{
    average_mutual_information, conditional_mutual_information, enumerate_channels,
    mutual_information, EveSplit, ModeSet,
};
use crate::error::Result;
use crate::qmath::DensityMatrix;
use crate::secure::ghz_baseline;
use crate::sweep::{grid, state_for, Scale};
use crate::table::Table;

pub const FIG_GAMMA_X: f64 = 1.0;
pub const FIG_RATIO: f64 = 2.0;
pub const FIG_POINTS: usize = 200;
pub const FIG_GX_DT_MIN: f64 = 1e-2;
pub const FIG_GX_DT_MAX: f64 = 10.0;

/// The `Γ_XΔt` values of both figure tables.
pub fn figure_grid() -> Vec<f64> {
    grid(FIG_GX_DT_MIN, FIG_GX_DT_MAX, FIG_POINTS, Scale::Log)
}

fn params_at(gx_dt: f64) -> Result<DecayParams> {
    DecayParams::new(FIG_RATIO * FIG_GAMMA_X, FIG_GAMMA_X, gx_dt / FIG_GAMMA_X)
}

/// Columns: `gx_dt, mi_ch1..mi_ch7, mi_avg, mi_ghz`.
pub fn fig3_table_at(gx_dts: &[f64]) -> Result<Table> {
    let channels = enumerate_channels();
    let ghz = DensityMatrix::from_pure(&ghz_state(4)?)?;
    let mut header = vec!["gx_dt".to_string()];
    header.extend(channels.iter().map(|ch| format!("mi_ch{}", ch.id())));
    header.push("mi_avg".into());
    header.push("mi_ghz".into());

    let mi_ghz = average_mutual_information(&ghz)?;
    let rows = gx_dts
        .par_iter()
        .map(|&x| {
            let rho = state_for(&params_at(x)?, None, false)?;
            let mut row = vec![x];
            for ch in &channels {
                row.push(mutual_information(&rho, ch)?);
            }
            row.push(average_mutual_information(&rho)?);
            row.push(mi_ghz);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

pub fn fig3_table() -> Result<Table> {
    fig3_table_at(&figure_grid())
}

/// The Eve choices plotted for channel 1 (Alice = EarlyB) and channel 5
/// (Alice = EarlyB+EarlyX), one Bob mode each.
pub fn fig4_splits() -> (Vec<EveSplit>, Vec<EveSplit>) {
    use ModeLabel::*;
    let ch1_alice = ModeSet::of(&[EarlyB]);
    let ch5_alice = ModeSet::of(&[EarlyB, EarlyX]);
    let ch1 = [EarlyX, LateB, LateX]
        .iter()
        .map(|&m| EveSplit::with_eve(ch1_alice, ModeSet::of(&[m])).expect("valid split"))
        .collect();
    let ch5 = [LateB, LateX]
        .iter()
        .map(|&m| EveSplit::with_eve(ch5_alice, ModeSet::of(&[m])).expect("valid split"))
        .collect();
    (ch1, ch5)
}

/// Columns: `gx_dt`, `cmi_ch1_eve_{EX,LB,LX}`, `ghz_ch1`,
/// `cmi_ch5_eve_{LB,LX}`, `ghz_ch5`.
pub fn fig4_table_at(gx_dts: &[f64]) -> Result<Table> {
    let (ch1, ch5) = fig4_splits();
    let mut header = vec!["gx_dt".to_string()];
    header.extend(ch1.iter().map(|s| format!("cmi_ch1_eve_{}", s.eve())));
    header.push("ghz_ch1".into());
    header.extend(ch5.iter().map(|s| format!("cmi_ch5_eve_{}", s.eve())));
    header.push("ghz_ch5".into());

    let ghz1 = ghz_baseline(&ch1[0])?;
    let ghz5 = ghz_baseline(&ch5[0])?;
    let rows = gx_dts
        .par_iter()
        .map(|&x| {
            let rho = state_for(&params_at(x)?, None, false)?;
            let mut row = vec![x];
            for s in &ch1 {
                row.push(conditional_mutual_information(&rho, s)?);
            }
            row.push(ghz1);
            for s in &ch5 {
                row.push(conditional_mutual_information(&rho, s)?);
            }
            row.push(ghz5);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

pub fn fig4_table() -> Result<Table> {
    fig4_table_at(&figure_grid())
}

pub fn write_fig3(path: &Path) -> Result<()> {
    fig3_table()?.write_csv(path)
}

pub fn write_fig4(path: &Path) -> Result<()> {
    fig4_table()?.write_csv(path)
}
