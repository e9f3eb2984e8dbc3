//! JSON run configuration shared by `evolve` and `decay`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Result;
use nlpme::diagnostics::sample_selfsim;
use nlpme::solver::{CauchyConfig, DiffusionScheme};
use nlpme::{BarenblattSpec, Grid, MediumParams};
use serde::{Deserialize, Serialize};

use crate::output::read_snapshot;
use crate::UsageError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: usize,
    pub m: f64,
    pub alpha: f64,
    /// Half-width of the periodic box `[−L, L)^d`.
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
    pub t0: f64,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub diffusion: DiffusionScheme,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    pub initial: Initial,
}

fn default_cfl() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    /// Self-similar solution at `t0`, fixed by its radius or its mass.
    Barenblatt {
        #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
    /// A snapshot file; relative paths resolve against the config's directory.
    File { path: PathBuf },
}

/// A validated configuration ready to run.
#[derive(Debug)]
pub struct Prepared {
    pub config: RunConfig,
    pub cauchy: CauchyConfig,
    /// The exact solution when the data are self-similar.
    pub exact: Option<BarenblattSpec>,
}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    /// Builds the solver config; `base` anchors relative file paths.
    pub fn prepare(self, base: &Path) -> Result<Prepared> {
        let params = MediumParams::new(self.d, self.m, self.alpha).map_err(usage)?;
        let grid = Grid::new(self.d, self.half_width, self.n).map_err(usage)?;
        let (u0, exact) = match &self.initial {
            Initial::Barenblatt { radius, mass } => {
                let spec = match (radius, mass) {
                    (Some(r), None) => BarenblattSpec::new(params, *r),
                    (None, Some(m)) => BarenblattSpec::with_mass(params, *m),
                    _ => return Err(usage("initial barenblatt data need exactly one of R and mass")),
                }
                .map_err(usage)?;
                (sample_selfsim(&spec, self.t0, grid).map_err(usage)?, Some(spec))
            }
            Initial::File { path } => {
                let full = if path.is_absolute() { path.clone() } else { base.join(path) };
                (read_snapshot(&full, grid).map_err(|e| usage(format!("{e:#}")))?, None)
            }
        };
        let mut times = self.snapshot_times.clone();
        if times.last().map_or(true, |&t| t < self.t_end) {
            times.push(self.t_end);
        }
        let cauchy = CauchyConfig {
            cfl: self.cfl,
            epsilon: self.epsilon,
            diffusion: self.diffusion,
            ..CauchyConfig::new(params, u0, self.t0, self.t_end)
        }
        .with_snapshots(times);
        cauchy.validate().map_err(usage)?;
        Ok(Prepared { config: self, cauchy, exact })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<RunConfig> {
        serde_json::from_str(json).map_err(Into::into)
    }

    const BENCH: &str = r#"{"d": 1, "m": 2, "alpha": 1, "L": 8, "n": 256, "t0": 1, "t_end": 2,
        "initial": {"type": "barenblatt", "mass": 1}}"#;

    #[test]
    fn defaults_fill_in() {
        let c = parse(BENCH).unwrap();
        assert_eq!(c.cfl, 1.0);
        assert_eq!(c.epsilon, 0.0);
        assert!(c.snapshot_times.is_empty());
        let p = c.prepare(Path::new(".")).unwrap();
        assert_eq!(p.cauchy.snapshot_times, vec![2.0]);
        assert!(p.exact.is_some());
    }

    #[test]
    fn radius_and_mass_are_exclusive() {
        let json = BENCH.replace(r#""mass": 1"#, r#""mass": 1, "R": 1"#);
        let err = parse(&json).unwrap().prepare(Path::new(".")).unwrap_err();
        assert!(err.is::<UsageError>());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse(&BENCH.replace(r#""n": 256"#, r#""n": 256, "dt": 0.1"#)).is_err());
    }
}
