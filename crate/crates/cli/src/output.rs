//! Atomic report files: each is written to a temporary file in the target
//! directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Run metadata carried by every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub toolkit: String,
    pub kind: String,
    pub name: String,
    pub seed: u64,
    /// Direction samples per estimate, when the run uses Monte Carlo.
    pub samples: Option<u64>,
}

impl Header {
    pub fn new(kind: &str, name: &str, seed: u64, samples: Option<u64>) -> Self {
        Self {
            toolkit: format!("kplus {}", env!("CARGO_PKG_VERSION")),
            kind: kind.into(),
            name: name.into(),
            seed,
            samples,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a, P: Serialize, R: Serialize> {
    pub header: &'a Header,
    pub params: &'a P,
    pub passed: bool,
    pub results: &'a R,
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Serializes `rows` as CSV with a header line taken from the row fields.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

/// Writes `<out>/<stem>.csv` and `<out>/<stem>.json`.
pub fn write_pair<T: Serialize, J: Serialize>(
    out: &Path,
    stem: &str,
    rows: &[T],
    report: &J,
) -> Result<(PathBuf, PathBuf), CliError> {
    let csv_path = out.join(format!("{stem}.csv"));
    let json_path = out.join(format!("{stem}.json"));
    write_atomic(&csv_path, &csv_bytes(rows)?)?;
    write_atomic(&json_path, &json_bytes(report)?)?;
    Ok((csv_path, json_path))
}
