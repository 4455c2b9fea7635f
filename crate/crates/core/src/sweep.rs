//! Delay sweeps of amplitudes, fidelity, per-channel mutual information and
//! eavesdropper-conditioned rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::DecayParams;
use crate::cascade::{amplitudes, dephased_density, final_state, ghz_fidelity, ghz_state};
use crate::entanglement::{
    average_mutual_information, conditional_mutual_information, mutual_information, Channel,
    EveSplit,
};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// Which delays to visit and what to compute at each.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub gamma_b: f64,
    pub gamma_x: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub points: usize,
    pub scale: Scale,
    pub channels: Vec<Channel>,
    pub splits: Vec<EveSplit>,
    /// Off-diagonal attenuation of the final state, if any.
    pub dephase: Option<f64>,
    /// Evaluate correlations on the four-mode GHZ state instead.
    pub ghz_reference: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidSpec { field, reason });
        if !(self.gamma_b > 0.0 && self.gamma_b.is_finite()) {
            return bad("gamma_b", format!("must be positive, got {}", self.gamma_b));
        }
        if !(self.gamma_x > 0.0 && self.gamma_x.is_finite()) {
            return bad("gamma_x", format!("must be positive, got {}", self.gamma_x));
        }
        if !(self.dt_min >= 0.0 && self.dt_min.is_finite()) {
            return bad(
                "dt_min",
                format!("must be non-negative, got {}", self.dt_min),
            );
        }
        if self.scale == Scale::Log && self.dt_min <= 0.0 {
            return bad("dt_min", "log scale needs dt_min > 0".into());
        }
        if !(self.dt_max > self.dt_min && self.dt_max.is_finite()) {
            return bad(
                "dt_max",
                format!("must exceed dt_min ({}), got {}", self.dt_min, self.dt_max),
            );
        }
        if self.points < 2 {
            return bad("points", format!("need at least 2, got {}", self.points));
        }
        if let Some(d) = self.dephase {
            if !(0.0..=1.0).contains(&d) {
                return bad("dephase", format!("must lie in [0, 1], got {d}"));
            }
        }
        Ok(())
    }

    /// Delays in ascending order. Both endpoints are exact.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(grid(self.dt_min, self.dt_max, self.points, self.scale))
    }
}

pub(crate) fn grid(lo: f64, hi: f64, points: usize, scale: Scale) -> Vec<f64> {
    let last = points - 1;
    (0..points)
        .map(|i| {
            if i == 0 {
                return lo;
            }
            if i == last {
                return hi;
            }
            let f = i as f64 / last as f64;
            match scale {
                Scale::Linear => lo + (hi - lo) * f,
                Scale::Log => (lo.ln() + (hi.ln() - lo.ln()) * f).exp(),
            }
        })
        .collect()
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub dt: f64,
    pub gx_dt: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma2: f64,
    pub fidelity: f64,
    /// Parallel to [`SweepSpec::channels`].
    pub mi: Vec<f64>,
    pub mi_avg: f64,
    /// Parallel to [`SweepSpec::splits`].
    pub cmi: Vec<f64>,
}

/// The state a spec analyses at delay `p.delta_t()`.
pub fn state_for(
    p: &DecayParams,
    dephase: Option<f64>,
    ghz_reference: bool,
) -> Result<DensityMatrix> {
    if ghz_reference {
        DensityMatrix::from_pure(&ghz_state(4)?)
    } else if let Some(d) = dephase {
        dephased_density(p, d)
    } else {
        DensityMatrix::from_pure(&final_state(p))
    }
}

/// Evaluates a single delay; [`run_sweep`] is this applied to every grid point.
pub fn evaluate_point(spec: &SweepSpec, dt: f64) -> Result<ResultRow> {
    let p = DecayParams::new(spec.gamma_b, spec.gamma_x, dt)?;
    let [alpha2, beta2, gamma2] = amplitudes(&p).probabilities();
    let rho = state_for(&p, spec.dephase, spec.ghz_reference)?;
    let mi = spec
        .channels
        .iter()
        .map(|ch| mutual_information(&rho, ch))
        .collect::<Result<Vec<_>>>()?;
    let cmi = spec
        .splits
        .iter()
        .map(|s| conditional_mutual_information(&rho, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultRow {
        dt,
        gx_dt: spec.gamma_x * dt,
        alpha2,
        beta2,
        gamma2,
        fidelity: ghz_fidelity(&p),
        mi,
        mi_avg: average_mutual_information(&rho)?,
        cmi,
    })
}

/// Rows ordered by ascending delay. Points are independent and may be
/// evaluated in parallel; the output does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    let dts = spec.grid()?;
    dts.par_iter().map(|&dt| evaluate_point(spec, dt)).collect()
}

/// Flattens sweep rows into a table with one column per channel and split.
pub fn sweep_table(spec: &SweepSpec, rows: &[ResultRow]) -> Table {
    let mut header: Vec<String> = ["dt", "gx_dt", "alpha2", "beta2", "gamma2", "fidelity"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(spec.channels.iter().map(|ch| format!("mi_ch{}", ch.id())));
    header.push("mi_avg".into());
    header.extend(spec.splits.iter().map(|s| format!("cmi_{}", s.tag())));
    let mut table = Table::new(header);
    for r in rows {
        let mut v = vec![r.dt, r.gx_dt, r.alpha2, r.beta2, r.gamma2, r.fidelity];
        v.extend(&r.mi);
        v.push(r.mi_avg);
        v.extend(&r.cmi);
        table.rows.push(v);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::enumerate_channels;
    use std::f64::consts::LN_2;

    fn spec() -> SweepSpec {
        SweepSpec {
            gamma_b: 2.0,
            gamma_x: 1.0,
            dt_min: 0.0,
            dt_max: 60.0,
            points: 2,
            scale: Scale::Linear,
            channels: enumerate_channels(),
            splits: vec![],
            dephase: None,
            ghz_reference: false,
        }
    }

    #[test]
    fn product_state_endpoints() {
        let rows = run_sweep(&spec()).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            for &mi in &r.mi {
                assert!(mi.abs() < 1e-10, "{mi}");
            }
            assert!((r.alpha2 + r.beta2 + r.gamma2 - 1.0).abs() < 1e-12);
        }
        assert_eq!(rows[0].dt, 0.0);
        assert_eq!(rows[1].dt, 60.0);
    }

    #[test]
    fn channel_one_peaks_at_half_alpha() {
        let s = SweepSpec {
            dt_min: 0.05,
            dt_max: 1.0,
            points: 191,
            channels: vec![Channel::from_id(1).unwrap()],
            ..spec()
        };
        let rows = run_sweep(&s).unwrap();
        let best = rows
            .iter()
            .max_by(|a, b| a.mi[0].total_cmp(&b.mi[0]))
            .unwrap();
        // grid spacing 0.005; peak at Γ_BΔt = ln 2
        assert!((best.dt - LN_2 / 2.0).abs() <= 0.0025 + 1e-12);
        let exact = evaluate_point(&s, LN_2 / 2.0).unwrap();
        assert!((exact.mi[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn ghz_reference_is_flat() {
        let s = SweepSpec {
            dt_min: 0.1,
            dt_max: 3.0,
            points: 5,
            ghz_reference: true,
            ..spec()
        };
        for r in run_sweep(&s).unwrap() {
            for &mi in &r.mi {
                assert!((mi - 2.0).abs() < 1e-12);
            }
            assert!((r.mi_avg - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_fields_are_named() {
        let check = |s: SweepSpec, field: &str| match s.validate() {
            Err(Error::InvalidSpec { field: f, .. }) => assert_eq!(f, field),
            other => panic!("expected error on {field}, got {other:?}"),
        };
        check(
            SweepSpec {
                points: 1,
                ..spec()
            },
            "points",
        );
        check(
            SweepSpec {
                dt_min: -1.0,
                ..spec()
            },
            "dt_min",
        );
        check(
            SweepSpec {
                scale: Scale::Log,
                ..spec()
            },
            "dt_min",
        );
        check(
            SweepSpec {
                dt_max: 0.0,
                ..spec()
            },
            "dt_max",
        );
        check(
            SweepSpec {
                gamma_b: 0.0,
                ..spec()
            },
            "gamma_b",
        );
        check(
            SweepSpec {
                gamma_x: f64::NAN,
                ..spec()
            },
            "gamma_x",
        );
        check(
            SweepSpec {
                dephase: Some(2.0),
                ..spec()
            },
            "dephase",
        );
    }

    #[test]
    fn log_grid_endpoints() {
        let g = grid(0.01, 10.0, 200, Scale::Log);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[199], 10.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let ratio = g[1] / g[0];
        assert!((g[100] / g[99] - ratio).abs() < 1e-12);
    }

    #[test]
    fn table_columns() {
        let s = SweepSpec {
            splits: vec![EveSplit::with_eve("EB".parse().unwrap(), "EX".parse().unwrap()).unwrap()],
            ..spec()
        };
        let rows = run_sweep(&s).unwrap();
        let t = sweep_table(&s, &rows);
        assert_eq!(t.header.len(), 6 + 7 + 1 + 1);
        assert_eq!(t.header.last().unwrap(), "cmi_A=EB_E=EX");
        assert_eq!(t.rows.len(), 2);
    }
}
