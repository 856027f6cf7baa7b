//! Batch experiment runner over `soc-core`.
//!
//! A run reads one JSON experiment config, executes a subcommand and produces
//! a CSV table plus a run manifest. [`run`] is the pure part; [`invoke`] adds
//! file IO, timing and the manifest.

pub mod commands;
pub mod config;
pub mod csv;

use serde::Serialize;
use sha2::{Digest, Sha256};
use soc_core::linalg::DirectSumNorm;
use soc_core::{Limits, SocError};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

pub use commands::{run, RunOutput};
pub use config::{ExperimentConfig, Overrides, Subcommand};
pub use csv::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] SocError),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for violated preconditions, 3 for resource limits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_contract() => 2,
            CliError::Core(e) if e.is_capacity() => 3,
            _ => 1,
        }
    }
}

/// Everything one invocation needs besides the config file contents.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub subcommand: Subcommand,
    pub config_path: PathBuf,
    pub out: Option<PathBuf>,
    pub overrides: Overrides,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config_path: String,
    pub config_sha256: String,
    pub seed: u64,
    pub convention: &'static str,
    pub max_entries: usize,
    pub rows: usize,
    pub output: String,
    pub wall_time_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Manifest location for a CSV written to `out`: `out` with `.manifest.json` appended.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Runs one invocation. The CSV goes to the output path (flag, then config
/// `output_path`) with its manifest alongside, or to stdout without one.
pub fn invoke(inv: &Invocation, limits: &Limits) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let raw = std::fs::read_to_string(&inv.config_path).map_err(|source| CliError::Io {
        path: inv.config_path.clone(),
        source,
    })?;
    let output = run(inv.subcommand, &raw, &inv.overrides, limits)?;
    let csv = output.table.render();
    let out = inv
        .out
        .clone()
        .or_else(|| output.output_path.as_ref().map(PathBuf::from));
    match &out {
        Some(path) => {
            write_file(path, &csv)?;
            let manifest = RunManifest {
                tool: "soc",
                version: env!("CARGO_PKG_VERSION"),
                subcommand: inv.subcommand.as_str(),
                config_path: inv.config_path.display().to_string(),
                config_sha256: sha256_hex(raw.as_bytes()),
                seed: output.seed,
                convention: output.convention.as_str(),
                max_entries: limits.max_entries,
                rows: output.table.rows.len(),
                output: path.display().to_string(),
                wall_time_seconds: start.elapsed().as_secs_f64(),
            };
            let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            write_file(&manifest_path(path), &(json + "\n"))?;
        }
        None => print!("{csv}"),
    }
    Ok(output)
}

/// Parses a `--convention` value.
pub fn parse_convention(s: &str) -> Result<DirectSumNorm, String> {
    s.parse().map_err(|e: SocError| e.to_string())
}
