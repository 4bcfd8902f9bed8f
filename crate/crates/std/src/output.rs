//! CSV tables, the output directory and its manifest.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// A float with 17 significant digits; `nan`, `inf` and `-inf` spelled out.
pub fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// An in-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Comma-separated, LF-terminated UTF-8.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("writing to memory");
        for r in &self.rows {
            w.write_record(r).expect("writing to memory");
        }
        w.into_inner().expect("writing to memory")
    }
}

/// Shorthand for building rows from mixed cells.
#[macro_export]
macro_rules! row {
    ($($cell:expr),* $(,)?) => {
        vec![$($crate::output::Cell::cell(&$cell)),*]
    };
}

pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        fmt(*self)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

int_cell!(u8, u32, u64, usize, bool, &str, String);

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    schema: u32,
    command: &'a str,
    config: &'a str,
    config_sha256: String,
    warnings: &'a [String],
    outputs: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    rows: usize,
    sha256: String,
}

pub const CONFIG_FILE: &str = "config.toml";
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Write the tables, the effective config and a manifest hashing all of them.
pub fn write_all(dir: &Path, command: &str, config: &str, tables: &[Table], warnings: &[String]) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let write = |name: &str, bytes: &[u8]| {
        let p = dir.join(name);
        fs::write(&p, bytes).map_err(CliError::io(p))
    };
    write(CONFIG_FILE, config.as_bytes())?;
    let mut outputs = Vec::with_capacity(tables.len());
    for t in tables {
        let bytes = t.to_bytes();
        write(&t.name, &bytes)?;
        outputs.push(ManifestEntry {
            file: t.name.clone(),
            rows: t.len(),
            sha256: sha256_hex(&bytes),
        });
    }
    let manifest = Manifest {
        schema: crate::config::SCHEMA_VERSION,
        command,
        config: CONFIG_FILE,
        config_sha256: sha256_hex(config.as_bytes()),
        warnings,
        outputs,
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
    write(MANIFEST_FILE, text.as_bytes())
}
