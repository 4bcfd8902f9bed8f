//! Command-line driver for `levyruin-core`: TOML experiment configs, CSV
//! outputs with a hashed manifest, and deterministic parallel simulation.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

use std::fs;
use std::path::{Path, PathBuf};

pub use commands::{run, RunOutput};
pub use config::ExperimentConfig;
pub use error::{CliError, Result};

/// Load, override, run and write one experiment. Returns the output directory.
pub fn execute(config_path: &Path, overrides: &[String], out: Option<&Path>, seed: Option<u64>) -> Result<PathBuf> {
    let text = fs::read_to_string(config_path).map_err(CliError::io(config_path))?;
    let mut cfg = ExperimentConfig::parse(&text, overrides)?;
    if let Some(s) = seed {
        cfg.params.seed = s;
    }
    if let Some(o) = out {
        cfg.out = o.to_string_lossy().into_owned();
    }
    cfg.validate()?;
    let effective = cfg.to_toml()?;
    let result = run(&cfg)?;
    let dir = PathBuf::from(&cfg.out);
    output::write_all(&dir, cfg.command.name(), &effective, &result.tables, &result.warnings)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    Ok(dir)
}
