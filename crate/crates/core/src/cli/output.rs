//! Tabular run reports written as CSV (with `#` metadata lines) or JSON.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A named pass/fail outcome attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// The measured error or value the check is about.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `error ≤ tolerance` (a NaN error fails).
    pub fn within(
        name: impl Into<String>,
        error: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            pass: error <= tolerance,
            value: error,
            tolerance,
            detail: detail.into(),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            value: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }
}

/// Column names, rows of JSON scalars, the run configuration, and checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
}

/// A float cell; non-finite values become empty cells / `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

impl Report {
    pub fn new(command: &str, args: &impl Serialize, columns: &[&str]) -> Self {
        let mut config = Map::new();
        config.insert("tool".into(), json!("etapair"));
        config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        config.insert("command".into(), json!(command));
        if let Ok(Value::Object(fields)) = serde_json::to_value(args) {
            config.extend(fields);
        }
        Report {
            config: Value::Object(config),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "# etapair {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# config: {}", self.config)?;
        for c in &self.checks {
            writeln!(
                out,
                "# check: {} = {} (value {:e}, tolerance {:e}) {}",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                c.value,
                c.tolerance,
                c.detail
            )?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().cloned())
                        .collect(),
                )
            })
            .collect();
        let doc = json!({ "config": self.config, "rows": rows, "checks": self.checks });
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Args {
        length: usize,
    }

    fn sample() -> Report {
        let mut r = Report::new("demo", &Args { length: 4 }, &["x", "S[bits]"]);
        r.push(vec![json!(1), num(0.5)]);
        r.push(vec![json!("a,b"), num(f64::NAN)]);
        r.checks.push(Check::within("err", 1e-13, 1e-12, "ok"));
        r
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# etapair "));
        assert!(lines[1].contains("\"command\":\"demo\"") && lines[1].contains("\"length\":4"));
        assert!(lines[2].starts_with("# check: err = pass"));
        assert_eq!(lines[3], "x,S[bits]");
        assert_eq!(lines[4], "1,0.5");
        assert_eq!(lines[5], "\"a,b\",");
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["config"]["command"], "demo");
        assert_eq!(v["rows"][0]["S[bits]"], 0.5);
        assert_eq!(v["rows"][1]["S[bits]"], Value::Null);
        assert_eq!(v["checks"][0]["pass"], true);
    }
}
