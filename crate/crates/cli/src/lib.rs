//! Config-driven experiment runner behind the `resolab` binary.
//!
//! A run reads one TOML config, obtains a partition family (generated or
//! loaded), executes the requested commands in order and produces a single
//! canonical JSON report. Identical configs and seeds give byte-identical
//! reports regardless of the worker count.

pub mod config;
pub mod run;

use std::path::{Path, PathBuf};

use resolab_core::format::{family_from_str, family_to_string};
use resolab_core::PartitionFamily;
use serde_json::{Map, Value};
use thiserror::Error;

pub use config::Config;
pub use run::{run, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read family {path}: {source}")]
    Family {
        path: PathBuf,
        source: resolab_core::Error,
    },
    #[error("{0}")]
    Core(#[from] resolab_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_family(path: &Path) -> Result<PartitionFamily, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    family_from_str(&text).map_err(|source| CliError::Family {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_family(path: &Path, family: &PartitionFamily) -> Result<(), CliError> {
    std::fs::write(path, family_to_string(family)).map_err(io_error(path))
}

/// Rebuilds every object with its keys inserted in sorted order.
pub fn canonical(value: &Value) -> Value {
    match value {
        Value::Object(obj) => {
            let mut keys: Vec<&String> = obj.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&obj[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn report_to_string(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonical(report)).expect("values serialize");
    s.push('\n');
    s
}

pub fn save_report(path: &Path, report: &Value) -> Result<(), CliError> {
    std::fs::write(path, report_to_string(report)).map_err(io_error(path))
}
