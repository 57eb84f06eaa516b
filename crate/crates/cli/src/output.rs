//! Report rendering with fixed float formatting.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use hypercrit::series::fmt12;
use hypercrit::{Error, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// How a successful run ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// Nothing to evaluate, e.g. no conjugate within the radius.
    Empty,
    /// A checked inequality or example failed.
    Violated,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Empty => 3,
            Outcome::Violated => 4,
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub csv: String,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &'static str, result: impl Serialize, csv: String) -> Result<Self> {
        let json = serde_json::to_value(result).map_err(|e| Error::Invariant(format!("serializing report: {e}")))?;
        Ok(Report { command, json, csv, outcome: Outcome::Ok })
    }

    pub fn with_outcome(mut self, outcome: Outcome) -> Self {
        self.outcome = outcome;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let doc = json!({
                    "schemaVersion": SCHEMA_VERSION,
                    "command": self.command,
                    "result": round_floats(&self.json),
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Rounds every non-integer number to twelve significant digits.
pub fn round_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            // Adding 0.0 turns -0.0 into 0.0.
            let r: f64 = fmt12(x).parse::<f64>().unwrap_or(x) + 0.0;
            serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.iter().map(round_floats).collect()),
        Value::Object(obj) => Value::Object(obj.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect::<Map<_, _>>()),
        other => other.clone(),
    }
}

pub fn csv_row(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

pub fn write_out(text: &str, path: Option<&Path>) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("writing output: {e}"));
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_integers_and_trims_floats() {
        let v = json!({"a": 3, "b": [0.1 + 0.2, 1.0 / 3.0], "c": "x"});
        let r = round_floats(&v);
        assert_eq!(r["a"], json!(3));
        assert_eq!(r["b"][0], json!(0.3));
        assert_eq!(r["b"][1], json!(0.333333333333));
        assert_eq!(r["c"], json!("x"));
    }
}
