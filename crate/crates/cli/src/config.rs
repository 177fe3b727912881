//! Sweep configuration: a flat TOML file, overridable from the command line.
//!
//! ```toml
//! p_grid = { start = 0.0, stop = 0.5, step = 0.01 }
//! alpha_grid = [0.0, 0.05, 0.1, 0.15, 0.2]
//! process = "iud"            # or "markov1", which needs beta_grid
//! n = 100000                 # block length for estimate / exact
//! replicates = 30
//! master_seed = 0
//! outputs = ["bounds", "gap"]
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use bpmr_channel::estimator::{DEFAULT_BLOCK_LEN, DEFAULT_REPLICATES};
use bpmr_channel::exact::ENUMERATION_LIMIT;
use bpmr_channel::InputKind;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Column groups a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Bounds,
    Estimate,
    Exact,
    Gap,
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "bounds" => Ok(Output::Bounds),
            "estimate" => Ok(Output::Estimate),
            "exact" => Ok(Output::Exact),
            "gap" => Ok(Output::Gap),
            other => Err(format!("unknown output {other:?} (expected bounds, estimate, exact or gap)")),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::Bounds => "bounds",
            Output::Estimate => "estimate",
            Output::Exact => "exact",
            Output::Gap => "gap",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Option<Vec<f64>>,
    pub process: InputKind,
    pub n: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub outputs: BTreeSet<Output>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_grid: expand_range(0.0, 0.5, 0.01).expect("valid default range"),
            alpha_grid: vec![0.0, 0.05, 0.1, 0.15, 0.2],
            beta_grid: None,
            process: InputKind::Iud,
            n: DEFAULT_BLOCK_LEN,
            replicates: DEFAULT_REPLICATES,
            master_seed: 0,
            outputs: [Output::Bounds, Output::Gap].into_iter().collect(),
        }
    }
}

/// A grid given either as explicit values or as an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl GridSpec {
    pub fn expand(&self) -> std::result::Result<Vec<f64>, String> {
        match self {
            GridSpec::Values(v) => Ok(v.clone()),
            GridSpec::Range { start, stop, step } => expand_range(*start, *stop, *step),
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    /// `start:step:stop` or a comma-separated list.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, step, stop] => Ok(GridSpec::Range {
                start: num(start)?,
                stop: num(stop)?,
                step: num(step)?,
            }),
            [_] => s.split(',').map(num).collect::<std::result::Result<_, _>>().map(GridSpec::Values),
            _ => Err(format!("grid {s:?} must be start:step:stop or a comma-separated list")),
        }
    }
}

/// Inclusive arithmetic range, values rounded to 12 decimals so that
/// `0.1 * 3` prints as `0.3`.
pub fn expand_range(start: f64, stop: f64, step: f64) -> std::result::Result<Vec<f64>, String> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(format!("range start={start} stop={stop} step={step} is empty or ill-formed"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// The file layout; every key optional so defaults fill the gaps.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    p_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    process: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<Output>>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct SweepOverrides {
    pub p_grid: Option<GridSpec>,
    pub alpha_grid: Option<GridSpec>,
    pub beta_grid: Option<GridSpec>,
    pub process: Option<InputKind>,
    pub n: Option<usize>,
    pub replicates: Option<usize>,
    pub master_seed: Option<u64>,
    pub outputs: Option<Vec<Output>>,
}

impl SweepConfig {
    /// Parses TOML text on top of `base`, then validates.
    pub fn from_toml_str(text: &str, origin: &str, base: SweepConfig) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::ConfigSyntax {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        let process = raw
            .process
            .as_deref()
            .map(InputKind::from_str)
            .transpose()
            .map_err(CliError::Config)?;
        let overrides = SweepOverrides {
            p_grid: raw.p_grid,
            alpha_grid: raw.alpha_grid,
            beta_grid: raw.beta_grid,
            process,
            n: raw.n,
            replicates: raw.replicates,
            master_seed: raw.master_seed,
            outputs: raw.outputs,
        };
        base.with_overrides(&overrides)
    }

    pub fn to_toml_string(&self) -> String {
        let raw = RawConfig {
            p_grid: Some(GridSpec::Values(self.p_grid.clone())),
            alpha_grid: Some(GridSpec::Values(self.alpha_grid.clone())),
            beta_grid: self.beta_grid.clone().map(GridSpec::Values),
            process: Some(self.process.to_string()),
            n: Some(self.n),
            replicates: Some(self.replicates),
            master_seed: Some(self.master_seed),
            outputs: Some(self.outputs.iter().copied().collect()),
        };
        toml::to_string(&raw).expect("config serializes")
    }

    pub fn with_overrides(mut self, o: &SweepOverrides) -> Result<Self> {
        let expand = |name: &str, g: &GridSpec| g.expand().map_err(|e| CliError::Config(format!("{name}: {e}")));
        if let Some(g) = &o.p_grid {
            self.p_grid = expand("p_grid", g)?;
        }
        if let Some(g) = &o.alpha_grid {
            self.alpha_grid = expand("alpha_grid", g)?;
        }
        if let Some(g) = &o.beta_grid {
            self.beta_grid = Some(expand("beta_grid", g)?);
        }
        if let Some(k) = o.process {
            self.process = k;
        }
        if let Some(n) = o.n {
            self.n = n;
        }
        if let Some(r) = o.replicates {
            self.replicates = r;
        }
        if let Some(s) = o.master_seed {
            self.master_seed = s;
        }
        if let Some(out) = &o.outputs {
            self.outputs = out.iter().copied().collect();
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let check_grid = |name: &str, grid: &[f64]| -> Result<()> {
            if grid.is_empty() {
                return Err(CliError::Config(format!("{name} is empty")));
            }
            match grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                Some(v) => Err(CliError::Config(format!("{name} value {v} is outside [0, 1]"))),
                None => Ok(()),
            }
        };
        check_grid("p_grid", &self.p_grid)?;
        check_grid("alpha_grid", &self.alpha_grid)?;
        match (self.process, &self.beta_grid) {
            (InputKind::Markov1, Some(b)) => check_grid("beta_grid", b)?,
            (InputKind::Markov1, None) => {
                return Err(CliError::Config("process markov1 needs a beta_grid".into()))
            }
            (InputKind::Iud, Some(_)) => {
                return Err(CliError::Config("beta_grid only applies to process markov1".into()))
            }
            (InputKind::Iud, None) => {}
        }
        if self.n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if self.outputs.contains(&Output::Exact) && self.n > ENUMERATION_LIMIT {
            return Err(CliError::Config(format!(
                "exact output needs n <= {ENUMERATION_LIMIT}, got n = {}",
                self.n
            )));
        }
        if self.outputs.contains(&Output::Estimate) && self.replicates < 2 {
            return Err(CliError::Config("estimate output needs replicates >= 2".into()));
        }
        Ok(())
    }

    /// Grid values above 0.5, which describe channels worse than a coin flip
    /// in the respective error mechanism.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(p) = self.p_grid.iter().find(|&&p| p > 0.5) {
            out.push(format!("p_grid contains {p} > 0.5; practical channels have small p"));
        }
        if let Some(a) = self.alpha_grid.iter().find(|&&a| a > 0.5) {
            out.push(format!("alpha_grid contains {a} > 0.5; practical channels have small alpha"));
        }
        out
    }
}

/// Reads and validates a configuration file on top of `base`.
pub fn parse_config(path: &Path, base: SweepConfig) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SweepConfig::from_toml_str(&text, &path.display().to_string(), base)
}
