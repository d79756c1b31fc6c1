//! CSV and JSON writers. Numbers are written with 17 significant digits so
//! that repeated runs can be compared byte for byte.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_owned())
    }
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_string(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match cell {
                Cell::Num(v) => out.push_str(&format_number(*v)),
                Cell::Text(s) => out.push_str(s),
            }
        }
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), CliError> {
    write_file(path, &csv_string(header, rows))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    write_file(path, &text)
}

/// A JSON number, or `null` for values JSON cannot hold.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Human-readable line for a worst residual.
pub fn fmt_worst(v: f64) -> String {
    format!("{v:.3e}")
}
