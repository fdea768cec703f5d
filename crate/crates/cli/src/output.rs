//! Deterministic table output: a `#`-prefixed config header (every resolved
//! parameter, sorted by key, plus one timestamp line excluded from the
//! determinism contract) followed by CSV or JSON-lines rows.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format {other:?} (expected csv or jsonl)")),
        }
    }
}

#[derive(Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn write_table(
    command: &str,
    config: &[(String, String)],
    table: &Table,
    format: Format,
    out: Option<&Path>,
) -> io::Result<()> {
    let mut sorted: Vec<&(String, String)> = config.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut body = String::new();
    body.push_str(&format!("# command={command}\n"));
    for (k, v) in sorted {
        body.push_str(&format!("# {k}={v}\n"));
    }
    body.push_str(&format!("# timestamp={}\n", chrono::Utc::now().to_rfc3339()));
    match format {
        Format::Csv => {
            body.push_str(&table.columns.join(","));
            body.push('\n');
            for row in &table.rows {
                body.push_str(&row.join(","));
                body.push('\n');
            }
        }
        Format::Jsonl => {
            for row in &table.rows {
                let mut map = serde_json::Map::new();
                for (col, val) in table.columns.iter().zip(row) {
                    map.insert(col.to_string(), serde_json::Value::String(val.clone()));
                }
                body.push_str(&serde_json::Value::Object(map).to_string());
                body.push('\n');
            }
        }
    }
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(body.as_bytes())?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            w.write_all(body.as_bytes())
        }
    }
}

/// Shortest round-trip rendering; infinities spelled out for CSV stability.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}
