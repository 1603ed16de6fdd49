//! Experiment configuration, read from TOML.
//!
//! Top-level keys: `model` (`er`, `config`, `triple`), `n`, `alpha`, `t_w`,
//! `t_f`, `reps`, `seed`, `max_edges`. Degree laws go under `dist_w` and
//! `dist_f` with `kind = "poisson" | "powerlaw" | "file"`. Mode-specific
//! tables: `triple`, `sweep`, `boundary`, `kernel`, `check_bound`.

use std::path::{Path, PathBuf};

use cascade_core::DegreeDistribution;
use serde::Deserialize;

use crate::error::{config_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Coupled Erdős–Rényi; both laws must be Poisson.
    #[default]
    Er,
    /// Coupled configuration model with arbitrary laws.
    Config,
    /// Three-layer ER overlay; extra layer set in `[triple]`.
    Triple,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistSpec {
    Poisson { mean: f64 },
    Powerlaw { exponent: f64, cutoff: f64 },
    /// CSV with a `k,p_k` header; relative paths resolve against the config file.
    File { path: PathBuf },
}

impl DistSpec {
    pub fn build(&self, base: &Path) -> Result<DegreeDistribution> {
        Ok(match self {
            DistSpec::Poisson { mean } => DegreeDistribution::poisson(*mean)?,
            DistSpec::Powerlaw { exponent, cutoff } => DegreeDistribution::powerlaw_cutoff(*exponent, *cutoff)?,
            DistSpec::File { path } => DegreeDistribution::from_pmf_file(base.join(path))?,
        })
    }

    pub fn poisson_mean(&self) -> Option<f64> {
        match self {
            DistSpec::Poisson { mean } => Some(*mean),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    pub alpha_t: f64,
    pub lambda_t: f64,
    #[serde(default = "one")]
    pub t_t: f64,
}

/// Explicit `values`, or `start`, `stop`, `step` (inclusive).
#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match (&self.values, self.start, self.stop, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(h)) => {
                if !(h > 0.0) || !(b >= a) {
                    return config_err(format!("grid needs step > 0 and stop >= start, got {a}..{b} by {h}"));
                }
                let count = ((b - a) / h + 1e-9).floor() as usize + 1;
                if count > 1_000_000 {
                    return config_err("grid has more than 10^6 points");
                }
                // rounding keeps 0.1 + 2 * 0.1 printing as 0.3
                (0..count).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect()
            }
            _ => return config_err("grid needs either `values` or all of `start`, `stop`, `step`"),
        };
        if v.is_empty() {
            return config_err("grid is empty");
        }
        if v.iter().any(|x| !x.is_finite()) {
            return config_err("grid values must be finite");
        }
        Ok(v)
    }
}

/// Sweep axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Alpha,
    /// Sets every transmissibility.
    T,
    TW,
    TF,
    /// Poisson mean of both social and physical laws.
    Lambda,
    LambdaW,
    LambdaF,
    /// Common excess-degree strength `T_x beta_x` (`T_x lambda_x` for Poisson).
    Strength,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Alpha => "alpha",
            Axis::T => "t",
            Axis::TW => "t_w",
            Axis::TF => "t_f",
            Axis::Lambda => "lambda",
            Axis::LambdaW => "lambda_w",
            Axis::LambdaF => "lambda_f",
            Axis::Strength => "strength",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

impl SweepSpec {
    pub fn grid(&self) -> Grid {
        Grid { values: self.values.clone(), start: self.start, stop: self.stop, step: self.step }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    #[default]
    Er,
    General,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub mode: BoundaryKind,
    /// Upper end of the social-strength search; defaults per mode.
    pub cap: Option<f64>,
    /// Physical strengths, as a grid: `x` or `x_start`, `x_stop`, `x_step`.
    pub x: Option<Vec<f64>>,
    pub x_start: Option<f64>,
    pub x_stop: Option<f64>,
    pub x_step: Option<f64>,
}

impl BoundarySpec {
    pub fn grid(&self) -> Grid {
        Grid { values: self.x.clone(), start: self.x_start, stop: self.x_stop, step: self.x_step }
    }
}

/// A kernel model file, or the triple-network parameters of the main config.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckBoundSpec {
    pub gamma: f64,
    /// Complete social graph on the members instead of ER.
    #[serde(default)]
    pub complete_f: bool,
}

fn one() -> f64 {
    1.0
}
fn default_n() -> usize {
    200_000
}
fn default_reps() -> usize {
    200
}
fn default_seed() -> u64 {
    1
}
fn default_max_edges() -> u64 {
    100_000_000
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub model: Model,
    #[serde(default = "default_n")]
    pub n: usize,
    pub alpha: Option<f64>,
    #[serde(default = "one")]
    pub t_w: f64,
    #[serde(default = "one")]
    pub t_f: f64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Refuse to build graphs with more expected edges than this.
    #[serde(default = "default_max_edges")]
    pub max_edges: u64,
    pub dist_w: Option<DistSpec>,
    pub dist_f: Option<DistSpec>,
    pub triple: Option<TripleSpec>,
    pub sweep: Option<SweepSpec>,
    pub boundary: Option<BoundarySpec>,
    pub kernel: Option<KernelSpec>,
    pub check_bound: Option<CheckBoundSpec>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if self.reps == 0 {
            return config_err("reps must be at least 1");
        }
        if self.n == 0 {
            return config_err("n must be at least 1");
        }
        Ok(())
    }

    pub fn alpha(&self) -> Result<f64> {
        self.alpha.ok_or_else(|| HarnessError::Config("missing `alpha`".into()))
    }

    pub fn dist_w(&self) -> Result<&DistSpec> {
        self.dist_w.as_ref().ok_or_else(|| HarnessError::Config("missing `dist_w`".into()))
    }

    pub fn dist_f(&self) -> Result<&DistSpec> {
        self.dist_f.as_ref().ok_or_else(|| HarnessError::Config("missing `dist_f`".into()))
    }

    pub fn triple(&self) -> Result<TripleSpec> {
        self.triple.ok_or_else(|| HarnessError::Config("model `triple` needs a `[triple]` table".into()))
    }

    /// Applies CLI overrides.
    pub fn override_with(&mut self, seed: Option<u64>, reps: Option<usize>, n: Option<usize>) -> Result<()> {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(r) = reps {
            self.reps = r;
        }
        if let Some(n) = n {
            self.n = n;
        }
        self.check()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
model = "config"
n = 1000
alpha = 0.3
reps = 5
seed = 9
dist_w = { kind = "poisson", mean = 1.5 }
dist_f.kind = "powerlaw"
dist_f.exponent = 2.5
dist_f.cutoff = 10.0

[sweep]
axis = "strength"
start = 0.5
stop = 0.7
step = 0.1
"#,
        )
        .unwrap();
        assert_eq!(cfg.model, Model::Config);
        assert_eq!(cfg.dist_w, Some(DistSpec::Poisson { mean: 1.5 }));
        assert_eq!(cfg.dist_f, Some(DistSpec::Powerlaw { exponent: 2.5, cutoff: 10.0 }));
        let s = cfg.sweep.unwrap();
        assert_eq!(s.axis, Axis::Strength);
        assert_eq!(s.grid().values().unwrap(), vec![0.5, 0.6, 0.7]);
        assert_eq!((cfg.t_w, cfg.t_f, cfg.max_edges), (1.0, 1.0, 100_000_000));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str("reps = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml_str("model = \"lattice\"").is_err());
        assert!(ExperimentConfig::from_toml_str("dist_w = { kind = \"poisson\", mean = 1.0, extra = 2 }").is_err());
        let cfg = ExperimentConfig::from_toml_str("[sweep]\naxis = \"t\"\nvalues = []\n").unwrap();
        assert!(cfg.sweep.unwrap().grid().values().is_err());
        let cfg = ExperimentConfig::from_toml_str("[sweep]\naxis = \"t\"\nvalues = [0.1]\nstart = 0.0\n").unwrap();
        assert!(cfg.sweep.unwrap().grid().values().is_err());
        assert!(ExperimentConfig::from_toml_str("[sweep]\naxis = \"temperature\"\nvalues = [1.0]\n").is_err());
    }

    #[test]
    fn overrides() {
        let mut cfg = ExperimentConfig::from_toml_str("alpha = 0.5").unwrap();
        cfg.override_with(Some(3), Some(7), Some(99)).unwrap();
        assert_eq!((cfg.seed, cfg.reps, cfg.n), (3, 7, 99));
        assert!(cfg.override_with(None, Some(0), None).is_err());
    }
}
