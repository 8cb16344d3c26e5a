//! JSON and CSV boundaries.
//!
//! JSON floats are written in shortest round-trip form, which re-parses to
//! the identical double. CSV cells use 17 significant digits.

use crate::error::{CliError, CliResult};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fs;
use std::path::Path;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    // every report type serializes infallibly: no maps with non-string keys
    serde_json::to_string_pretty(value).expect("report serialization")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = to_json_string(value);
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn format_cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

/// Write a CSV with a header row; `None` cells are left empty.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Option<f64>>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| format_cell(v)))?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Read back a CSV written by [`write_csv`].
pub fn read_csv(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<Option<f64>>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|cell| {
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse::<f64>()
                        .map(Some)
                        .map_err(|e| CliError::Input(format!("bad CSV cell {cell:?}: {e}")))
                }
            })
            .collect::<CliResult<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_cell(Some(x));
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_cell(None), "");
    }
}
