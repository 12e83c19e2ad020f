//! Rendering of command results as CSV, JSON or aligned text.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// What a command prints.
pub enum Doc {
    /// Rows of cells; `records` keeps typed JSON values when available.
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
        records: Option<Vec<Map<String, Value>>>,
    },
    Object(Value),
}

impl Doc {
    pub fn table(columns: Vec<String>, rows: Vec<Vec<String>>) -> Doc {
        Doc::Table { columns, rows, records: None }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match (self, format) {
            (Doc::Table { columns, rows, .. }, Format::Csv) => to_csv(columns, rows),
            (Doc::Table { columns, rows, records }, Format::Json) => {
                let recs: Vec<Value> = match records {
                    Some(r) => r.iter().cloned().map(Value::Object).collect(),
                    None => rows
                        .iter()
                        .map(|row| {
                            Value::Object(columns.iter().cloned().zip(row.iter().cloned().map(Value::String)).collect())
                        })
                        .collect(),
                };
                Ok(json_text(&Value::Array(recs)))
            }
            (Doc::Table { columns, rows, .. }, Format::Pretty) => Ok(aligned(columns, rows)),
            (Doc::Object(v), Format::Json) => Ok(json_text(v)),
            (Doc::Object(v), Format::Csv) => {
                let (cols, rows) = key_value_rows(v);
                to_csv(&cols, &rows)
            }
            (Doc::Object(v), Format::Pretty) => {
                let (_, rows) = key_value_rows(v);
                let width = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
                Ok(rows.iter().map(|r| format!("{:<width$}  {}\n", r[0], r[1])).collect())
            }
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn key_value_rows(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let rows = match v {
        Value::Object(m) => m.iter().map(|(k, x)| vec![k.clone(), scalar_text(x)]).collect(),
        other => vec![vec!["value".to_string(), scalar_text(other)]],
    };
    (vec!["key".into(), "value".into()], rows)
}

pub fn to_csv(columns: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8"))
}

fn aligned(columns: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = columns.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let mut s = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
        s.push('\n');
        s
    };
    let mut out = line(columns);
    out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

/// Output directory for artifacts, created on first use.
pub struct OutDir(Option<PathBuf>);

impl OutDir {
    pub fn new(path: Option<PathBuf>) -> OutDir {
        OutDir(path)
    }

    pub fn is_set(&self) -> bool {
        self.0.is_some()
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        if let Some(dir) = &self.0 {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        }
        Ok(())
    }
}

pub fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
