use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command result: one JSON document, and the table rows used for CSV.
pub struct Report {
    pub document: Value,
    pub rows: Vec<Value>,
}

impl Report {
    pub fn single(document: Value) -> Self {
        Self { rows: vec![document.clone()], document }
    }
}

/// Flattens nested objects into dotted keys; arrays become compact JSON strings.
pub fn flatten(value: &Value) -> Map<String, Value> {
    fn rec(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    rec(&key, x, out);
                }
            }
            Value::Array(_) => {
                out.insert(prefix.to_string(), Value::String(v.to_string()));
            }
            other => {
                out.insert(prefix.to_string(), other.clone());
            }
        }
    }
    let mut out = Map::new();
    rec("", value, &mut out);
    out
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

pub fn write_report(report: &Report, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", report.document),
        Format::Csv => {
            let flat: Vec<Map<String, Value>> = report.rows.iter().map(flatten).collect();
            // columns in first-seen order
            let mut columns: Vec<String> = Vec::new();
            for row in &flat {
                for k in row.keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
            if columns.is_empty() {
                return Ok(());
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&columns)?;
            for row in &flat {
                w.write_record(columns.iter().map(|c| cell(row.get(c))))?;
            }
            w.flush()
        }
    }
}
