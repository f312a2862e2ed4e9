use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

/// A table cell: numbers are written in full-precision scientific notation.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(if v.is_nan() { "nan" } else if *v > 0.0 { "inf" } else { "-inf" }),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.headers
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Result of one command: an optional table plus structured fields.
#[derive(Debug, Default)]
pub struct Report {
    pub fields: serde_json::Map<String, Value>,
    pub table: Option<Table>,
    pub table_key: &'static str,
}

impl Report {
    pub fn new() -> Self {
        Self {
            table_key: "rows",
            ..Self::default()
        }
    }

    pub fn field(mut self, key: &str, value: impl Serialize) -> Self {
        self.fields
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable field"));
        self
    }

    pub fn with_table(mut self, key: &'static str, table: Table) -> Self {
        self.table_key = key;
        self.table = Some(table);
        self
    }

    /// Writes the report with the run configuration embedded.
    pub fn render(&self, format: Format, config: &Value) -> Result<String> {
        let version = env!("CARGO_PKG_VERSION");
        match format {
            Format::Json => {
                let mut body = self.fields.clone();
                if let Some(t) = &self.table {
                    body.insert(self.table_key.to_string(), t.json());
                }
                let doc = json!({
                    "toolkit": "twopoint",
                    "version": version,
                    "config": config,
                    "result": Value::Object(body),
                });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
            Format::Csv => {
                let mut out = Vec::new();
                writeln!(out, "# twopoint {version}")?;
                writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
                for (k, v) in &self.fields {
                    writeln!(out, "# {k}: {}", serde_json::to_string(v)?)?;
                }
                {
                    let mut w = csv::Writer::from_writer(&mut out);
                    match &self.table {
                        Some(t) => {
                            w.write_record(&t.headers)?;
                            for row in &t.rows {
                                w.write_record(row.iter().map(Cell::csv))?;
                            }
                        }
                        None => {
                            w.write_record(["key", "value"])?;
                            for (k, v) in &self.fields {
                                flatten(&mut w, k, v)?;
                            }
                        }
                    }
                    w.flush()?;
                }
                String::from_utf8(out).context("csv output is not utf-8")
            }
        }
    }
}

fn flatten<W: Write>(w: &mut csv::Writer<W>, prefix: &str, v: &Value) -> Result<()> {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(w, &format!("{prefix}.{k}"), x)?;
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(w, &format!("{prefix}[{i}]"), x)?;
            }
        }
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_u64() && !n.is_i64() => w.write_record([prefix, &format!("{f:.16e}")])?,
            _ => w.write_record([prefix, &n.to_string()])?,
        },
        Value::String(s) => w.write_record([prefix, s])?,
        Value::Bool(b) => w.write_record([prefix, &b.to_string()])?,
        Value::Null => w.write_record([prefix, ""])?,
    }
    Ok(())
}
