//! Canonical JSON, CSV writing and the run report envelope.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Pretty-printed JSON with lexicographically sorted keys and a trailing
/// newline. Floats use the shortest representation that parses back to
/// the same value.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report types serialise to JSON");
    let mut text = serde_json::to_string_pretty(&sort_keys(value)).expect("JSON values always print");
    text.push('\n');
    text
}

/// A float field with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn optional_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Writes a header and rows of already formatted fields.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush().map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn prepare_dir(dir: &Path) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    Ok(dir.to_path_buf())
}

#[derive(Clone, Debug, Serialize)]
pub struct Caps {
    pub dim_cap: usize,
    pub codeword_guard: usize,
}

impl Caps {
    pub fn current() -> Self {
        Caps {
            dim_cap: qbclab_core::linalg::dim_cap(),
            codeword_guard: qbclab_core::codesim::CODEWORD_GUARD,
        }
    }
}

/// Metadata and result of one command, written as `report.json`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seeds: Vec<u64>,
    pub caps: Caps,
    pub inputs: BTreeMap<String, String>,
    pub parameters: Value,
    pub wall_clock_secs: f64,
    /// Set when the run stopped early; any CSV written holds the rows
    /// completed before the failure.
    pub partial: bool,
    pub error: Option<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, seeds: Vec<u64>, parameters: Value) -> Self {
        Report {
            tool: "qbclab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seeds,
            caps: Caps::current(),
            inputs: BTreeMap::new(),
            parameters,
            wall_clock_secs: 0.0,
            partial: false,
            error: None,
            result: Value::Null,
        }
    }
}

/// Parses a CSV float field back.
pub fn parse_float(field: &str) -> Option<f64> {
    field.parse().ok()
}
