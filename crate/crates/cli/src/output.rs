//! Result tables and their three renderings: an aligned human table on
//! stdout, CSV with a header row (floats carry 12 significant digits),
//! and a single JSON document.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Value {
    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    pub fn opt_float(v: Option<f64>) -> Self {
        v.map_or(Value::Empty, Value::Float)
    }

    pub fn opt_bool(v: Option<bool>) -> Self {
        v.map_or(Value::Empty, Value::Bool)
    }

    pub fn opt_text(v: Option<impl Into<String>>) -> Self {
        v.map_or(Value::Empty, |s| Value::Text(s.into()))
    }
}

/// A uniform result table plus free-form summary lines (human output
/// only; the summary also lands in the JSON document).
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

/// Floats in machine output carry 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.11e}")
}

fn machine_cell(v: &Value) -> String {
    match v {
        Value::Float(x) => fmt_float(*x),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => csv_escape(s),
        Value::Empty => String::new(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn human_cell(v: &Value) -> String {
    match v {
        Value::Float(x) => format!("{x:.6}"),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
        Value::Empty => "-".to_string(),
    }
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(machine_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let value_json = |v: &Value| match v {
            Value::Float(x) => serde_json::json!(x),
            Value::Int(i) => serde_json::json!(i),
            Value::Bool(b) => serde_json::json!(b),
            Value::Text(s) => serde_json::json!(s),
            Value::Empty => serde_json::Value::Null,
        };
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), value_json(v)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let summary: serde_json::Map<String, serde_json::Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), value_json(v)))
            .collect();
        serde_json::json!({ "rows": rows, "summary": summary })
    }

    pub fn to_human(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let cell = human_cell(v);
                        if cell.len() > widths[i] {
                            widths[i] = cell.len();
                        }
                        cell
                    })
                    .collect()
            })
            .collect();
        let mut out = String::new();
        let header: Vec<String> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:>width$}", c, width = widths[i]))
            .collect();
        out.push_str(&header.join("  "));
        out.push('\n');
        for row in rendered {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:>width$}", c, width = widths[i]))
                .collect();
            out.push_str(&cells.join("  "));
            out.push('\n');
        }
        for (key, value) in &self.summary {
            out.push_str(&format!("{key}: {}\n", human_cell(value)));
        }
        out
    }

    /// Emit the report: human table on stdout; machine output (CSV, or
    /// JSON with `json`) to `out` when given, otherwise JSON replaces the
    /// table on stdout when `json` is set.
    pub fn emit(&self, json: bool, out: Option<&Path>) -> Result<()> {
        let machine = if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            s.push('\n');
            s
        } else {
            self.to_csv()
        };
        match out {
            Some(path) => {
                let mut file = std::fs::File::create(path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                file.write_all(machine.as_bytes())
                    .with_context(|| format!("cannot write {}", path.display()))?;
                print!("{}", self.to_human());
            }
            None if json => print!("{machine}"),
            None => print!("{}", self.to_human()),
        }
        Ok(())
    }
}
