//! Experiment configuration files.
//!
//! A config is a TOML document with a versioned schema. Unknown keys are
//! rejected, and `--set key=value` overrides address keys by dotted path.

use serde::{Deserialize, Serialize};

use levyruin_core::copulas::LevyCopula;
use levyruin_core::decompose::JumpDecomposition;
use levyruin_core::firstpassage::{GridConfig, RiskModel};
use levyruin_core::margins::MarginalTail;
use levyruin_core::quad::QuadConfig;
use levyruin_core::rwalk::{DistCopula, DistMargin, IncrementModel};

use crate::error::{in_module, CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Decompose,
    Ruin,
    Cause,
    Triple,
    Quintuple,
    Rwalk,
    Simulate,
    Asymptotics,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Ruin => "ruin",
            Command::Cause => "cause",
            Command::Triple => "triple",
            Command::Quintuple => "quintuple",
            Command::Rwalk => "rwalk",
            Command::Simulate => "simulate",
            Command::Asymptotics => "asymptotics",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub command: Command,
    #[serde(default = "default_out")]
    pub out: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub quad: QuadSection,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rwalk: Option<RwalkConfig>,
}

fn default_out() -> String {
    "out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub drift: f64,
    pub margin1: MarginConfig,
    pub margin2: MarginConfig,
    pub copula: CopulaConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MarginConfig {
    Expo { lambda: f64, rate: f64 },
    Pareto { lambda: f64, alpha: f64, xm: f64 },
    StableLike { beta: f64, scale: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CopulaConfig {
    Independence,
    CompleteDependence,
    Clayton {
        #[serde(default = "one")]
        eta: f64,
        theta: f64,
    },
    Nonhom {
        #[serde(default = "one")]
        eta: f64,
        zeta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub cells: usize,
    pub series_tol: f64,
    pub far_step: f64,
    pub reach: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridConfig::default();
        Self {
            cells: g.cells,
            series_tol: g.series_tol,
            far_step: g.far_step,
            reach: g.reach,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSection {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSection {
    fn default() -> Self {
        let q = QuadConfig::default();
        Self {
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
            max_subdivisions: q.max_subdivisions,
        }
    }
}

/// Command parameters; each command reads the ones it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Barriers for `ruin`, `cause`, `triple`, `quintuple` and `asymptotics`.
    pub barriers: Vec<f64>,
    /// The barrier of `simulate`.
    pub barrier: f64,
    /// Tail arguments for `decompose`.
    pub z: Vec<f64>,
    /// Time points of the passage-time d.f.
    pub times: Vec<f64>,
    /// Overshoot points, and bin edges for `quintuple`.
    pub u: Vec<f64>,
    /// Undershoot points, and bin edges for `quintuple`.
    pub v: Vec<f64>,
    pub seed: u64,
    pub n_paths: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            barriers: vec![0.0, 1.0, 2.0, 5.0],
            barrier: 0.0,
            z: vec![0.25, 0.5, 1.0, 2.0, 5.0, 10.0],
            times: vec![0.5, 1.0, 2.0, 5.0],
            u: vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0],
            v: vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0],
            seed: 1,
            n_paths: 100_000,
            horizon: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RwalkConfig {
    pub copula: DistCopulaConfig,
    pub margin1: DistMarginConfig,
    pub margin2: DistMarginConfig,
    #[serde(default)]
    pub x: f64,
    #[serde(default = "default_rw_cells")]
    pub cells: usize,
    #[serde(default = "default_rw_tol")]
    pub tol: f64,
    /// Largest ladder index `j` tabulated.
    #[serde(default = "default_rw_steps")]
    pub max_j: usize,
    /// Simulated walks; `0` skips the simulation.
    #[serde(default)]
    pub paths: u64,
    #[serde(default = "default_rw_max_steps")]
    pub max_steps: u64,
}

fn default_rw_cells() -> usize {
    2048
}

fn default_rw_tol() -> f64 {
    1e-12
}

fn default_rw_steps() -> usize {
    5
}

fn default_rw_max_steps() -> u64 {
    100_000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistCopulaConfig {
    Independence,
    Comonotone,
    Clayton { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistMarginConfig {
    Exponential {
        rate: f64,
        #[serde(default)]
        zero_atom: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
        #[serde(default)]
        zero_atom: f64,
    },
}

impl MarginConfig {
    pub fn build(&self) -> Result<MarginalTail> {
        let m = match *self {
            MarginConfig::Expo { lambda, rate } => MarginalTail::expo(lambda, rate),
            MarginConfig::Pareto { lambda, alpha, xm } => MarginalTail::pareto(lambda, alpha, xm),
            MarginConfig::StableLike { beta, scale } => MarginalTail::stable_like(beta, scale),
        };
        m.map_err(in_module("margins"))
    }
}

impl CopulaConfig {
    pub fn build(&self) -> Result<LevyCopula> {
        let c = match *self {
            CopulaConfig::Independence => Ok(LevyCopula::Independence),
            CopulaConfig::CompleteDependence => Ok(LevyCopula::CompleteDependence),
            CopulaConfig::Clayton { eta, theta } => LevyCopula::clayton(eta, theta),
            CopulaConfig::Nonhom { eta, zeta } => LevyCopula::nonhom(eta, zeta),
        };
        c.map_err(in_module("copulas"))
    }
}

impl DistMarginConfig {
    pub fn build(&self) -> Result<DistMargin> {
        let (m, atom) = match *self {
            DistMarginConfig::Exponential { rate, zero_atom } => (DistMargin::exponential(rate), zero_atom),
            DistMarginConfig::Normal { mean, sd, zero_atom } => (DistMargin::normal(mean, sd), zero_atom),
        };
        let m = m.map_err(in_module("rwalk"))?;
        if atom == 0.0 {
            Ok(m)
        } else {
            m.with_zero_atom(atom).map_err(in_module("rwalk"))
        }
    }
}

impl RwalkConfig {
    pub fn build(&self) -> Result<IncrementModel> {
        let copula = match self.copula {
            DistCopulaConfig::Independence => DistCopula::Independence,
            DistCopulaConfig::Comonotone => DistCopula::Comonotone,
            DistCopulaConfig::Clayton { theta } => DistCopula::clayton(theta).map_err(in_module("rwalk"))?,
        };
        IncrementModel::new(copula, self.margin1.build()?, self.margin2.build()?).map_err(in_module("rwalk"))
    }
}

impl ExperimentConfig {
    /// Parse a config, applying `key=value` overrides before validation.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let cfg: Self = if overrides.is_empty() {
            toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?
        } else {
            let mut table: toml::Table =
                toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            // Round-trip through text so errors still point at a line.
            let merged = toml::to_string(&table).map_err(|e| CliError::Config(e.to_string()))?;
            toml::from_str(&merged)
                .map_err(|e| CliError::Config(format!("invalid config after overrides:\n{merged}\n{e}")))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that need no model construction.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        let needs_model = !matches!(self.command, Command::Rwalk);
        if needs_model && self.model.is_none() {
            return Err(CliError::Config(format!(
                "command `{}` needs a [model] table",
                self.command.name()
            )));
        }
        if self.command == Command::Rwalk && self.rwalk.is_none() {
            return Err(CliError::Config("command `rwalk` needs a [rwalk] table".into()));
        }
        if self.params.seed > i64::MAX as u64 {
            return Err(CliError::Config(format!(
                "seed {} exceeds {}",
                self.params.seed,
                i64::MAX
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> GridConfig {
        GridConfig {
            cells: self.grid.cells,
            series_tol: self.grid.series_tol,
            far_step: self.grid.far_step,
            reach: self.grid.reach,
        }
    }

    pub fn quad(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: self.quad.abs_tol,
            rel_tol: self.quad.rel_tol,
            max_subdivisions: self.quad.max_subdivisions,
        }
    }

    pub fn decomposition(&self) -> Result<JumpDecomposition> {
        let m = self
            .model
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [model] table".into()))?;
        let dec = JumpDecomposition::new(m.copula.build()?, m.margin1.build()?, m.margin2.build()?)
            .map_err(in_module("decompose"))?;
        Ok(dec.with_quad_config(self.quad()))
    }

    pub fn risk_model(&self) -> Result<RiskModel> {
        let m = self
            .model
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [model] table".into()))?;
        RiskModel::new(m.drift, self.decomposition()?)
            .and_then(|r| r.with_grid(self.grid()))
            .map_err(in_module("firstpassage"))
    }

    /// The config as written to the output directory.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot serialize config: {e}")))
    }
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{spec}` is not of the form key=value")))?;
    let value = parse_value(raw.trim());
    let mut parts: Vec<&str> = key.trim().split('.').collect();
    let last = parts
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError::Config(format!("empty key in `{spec}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override `{spec}`: `{p}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// A TOML value, or the raw text as a string when it does not parse.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
