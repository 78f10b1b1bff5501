//! Scenario files (JSON), per-run metrics (CSV) and summary sidecars.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use super::scenario::{Scenario, ScenarioError};
use super::sim::StepRecord;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: ScenarioError },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
}

impl IoError {
    /// True for problems with the input itself rather than the environment.
    /// A file that does not exist counts as bad input.
    pub fn is_invalid_input(&self) -> bool {
        match self {
            IoError::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            _ => true,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, IoError> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario.validate().map_err(|source| IoError::Invalid {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(scenario)
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_scenario(&text, path)
}

/// Every field is written, defaults included, so the file fully describes
/// the run.
pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut s = serde_json::to_string_pretty(scenario).expect("scenarios always serialize");
    s.push('\n');
    s
}

pub fn save_scenario(path: &Path, scenario: &Scenario) -> Result<(), IoError> {
    write_atomic(path, scenario_to_json(scenario).as_bytes())
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

pub fn records_to_csv(records: &[StepRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        // header only; serde writes it lazily with the first row
        w.write_record(csv_header()).expect("in-memory write");
    }
    for r in records {
        w.serialize(r).expect("records always serialize");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_csv(path: &Path, records: &[StepRecord]) -> Result<(), IoError> {
    write_atomic(path, &records_to_csv(records))
}

/// Column names of the metrics CSV, in order.
pub fn csv_header() -> Vec<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(StepRecord::default()).expect("in-memory write");
    let bytes = w.into_inner().expect("in-memory flush");
    let mut r = csv::Reader::from_reader(bytes.as_slice());
    r.headers().expect("header row").iter().map(str::to_string).collect()
}

/// Reads a metrics CSV, requiring the exact column layout.
pub fn read_csv(path: &Path) -> Result<Vec<StepRecord>, IoError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let csv_err = |message: String| IoError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut r = csv::Reader::from_reader(bytes.as_slice());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| csv_err(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != csv_header() {
        return Err(csv_err("column layout does not match the metrics schema".into()));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| csv_err(e.to_string())))
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut s = serde_json::to_string_pretty(value).expect("summaries always serialize");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}
