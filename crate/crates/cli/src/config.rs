//! Run settings merged from an optional JSON file and command-line flags.
//! Flags win over the file; anything left unset falls back to the reference
//! point `Γ_B = 2, Γ_X = 1, Γ_BΔt = ln 2`.

use std::path::Path;

use cascade_core::entanglement::{Channel, EveSplit, ModeSet};
use cascade_core::sweep::Scale;
use cascade_core::{DecayParams, Error, Result};
use serde::Deserialize;

pub const DEFAULT_RATIO: f64 = 2.0;
pub const DEFAULT_TRIALS: u64 = 1_000_000;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub gamma_b: Option<f64>,
    pub gamma_x: Option<f64>,
    pub ratio: Option<f64>,
    pub dt: Option<f64>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    pub points: Option<usize>,
    pub scale: Option<Scale>,
    pub channels: Option<Vec<u8>>,
    pub alice: Option<String>,
    pub eve: Option<String>,
    pub dephase: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub ghz_reference: Option<bool>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidSpec {
            field: "config",
            reason: format!("{}: {e}", path.display()),
        })
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: &Config) -> Self {
        overlay!(self, flags; gamma_b, gamma_x, ratio, dt, dt_min, dt_max, points, scale,
            channels, alice, eve, dephase, trials, seed, ghz_reference);
        self
    }

    /// `(Γ_B, Γ_X)`. Rates are in units where `Γ_X = 1` unless both are
    /// given; `ratio` sets `Γ_B/Γ_X`.
    pub fn rates(&self) -> Result<(f64, f64)> {
        match (self.gamma_b, self.gamma_x, self.ratio) {
            (Some(_), Some(_), Some(_)) => Err(Error::InvalidSpec {
                field: "ratio",
                reason: "cannot be combined with both --gamma-b and --gamma-x".into(),
            }),
            (Some(b), Some(x), None) => Ok((b, x)),
            (Some(b), None, None) => Ok((b, 1.0)),
            (Some(_), None, Some(_)) => Err(Error::InvalidSpec {
                field: "ratio",
                reason: "give --gamma-x instead of combining --ratio with --gamma-b".into(),
            }),
            (None, x, r) => {
                let x = x.unwrap_or(1.0);
                Ok((r.unwrap_or(DEFAULT_RATIO) * x, x))
            }
        }
    }

    /// Default delay: `Γ_BΔt = ln 2`, where `α² = 1/2`.
    pub fn dt(&self) -> Result<f64> {
        let (gb, _) = self.rates()?;
        Ok(self.dt.unwrap_or(std::f64::consts::LN_2 / gb))
    }

    pub fn params(&self) -> Result<DecayParams> {
        let (gb, gx) = self.rates()?;
        DecayParams::new(gb, gx, self.dt()?)
    }

    pub fn channels(&self) -> Result<Vec<Channel>> {
        match &self.channels {
            Some(ids) if !ids.is_empty() => ids.iter().map(|&id| Channel::from_id(id)).collect(),
            _ => Ok(cascade_core::enumerate_channels()),
        }
    }

    /// Alice from `alice` or the first channel's first part; Eve from `eve`.
    pub fn split(&self) -> Result<EveSplit> {
        let eve: ModeSet = match &self.eve {
            Some(s) => s.parse()?,
            None => {
                return Err(Error::InvalidSplit("--eve is required".into()));
            }
        };
        match (&self.alice, &self.channels) {
            (Some(a), _) => EveSplit::with_eve(a.parse()?, eve),
            (None, Some(ids)) if ids.len() == 1 => {
                EveSplit::from_channel(&Channel::from_id(ids[0])?, eve)
            }
            _ => Err(Error::InvalidSplit(
                "give --alice or a single --channel".into(),
            )),
        }
    }

    /// Optional split for sweeps: only when Eve is named.
    pub fn optional_split(&self) -> Result<Option<EveSplit>> {
        if self.eve.is_some() {
            self.split().map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_conventions() {
        let c = Config::default();
        assert_eq!(c.rates().unwrap(), (2.0, 1.0));
        let c = Config {
            ratio: Some(0.5),
            ..Config::default()
        };
        assert_eq!(c.rates().unwrap(), (0.5, 1.0));
        let c = Config {
            ratio: Some(3.0),
            gamma_x: Some(2.0),
            ..Config::default()
        };
        assert_eq!(c.rates().unwrap(), (6.0, 2.0));
        let c = Config {
            gamma_b: Some(4.0),
            ..Config::default()
        };
        assert_eq!(c.rates().unwrap(), (4.0, 1.0));
        let c = Config {
            gamma_b: Some(4.0),
            gamma_x: Some(3.0),
            ratio: Some(1.0),
            ..Config::default()
        };
        assert!(c.rates().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: Config =
            serde_json::from_str(r#"{"gamma_b": 3.0, "dt": 0.2, "seed": 5}"#).unwrap();
        let flags = Config {
            dt: Some(0.4),
            ..Config::default()
        };
        let c = file.overlay(&flags);
        assert_eq!(c.gamma_b, Some(3.0));
        assert_eq!(c.dt, Some(0.4));
        assert_eq!(c.seed(), 5);
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"gamma": 1}"#).is_err());
    }

    #[test]
    fn split_sources() {
        let c = Config {
            channels: Some(vec![5]),
            eve: Some("LB".into()),
            ..Config::default()
        };
        assert_eq!(c.split().unwrap().tag(), "A=EB+EX_E=LB");
        let c = Config {
            alice: Some("EB".into()),
            eve: Some("EB".into()),
            ..Config::default()
        };
        assert_eq!(
            c.split(),
            Err(Error::InvalidSplit("overlapping subsets".into()))
        );
        assert!(Config::default().split().is_err());
    }
}
