//! Result envelopes: every table carries the config hash and the seed.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Hex SHA-256 of the compact JSON encoding of the effective config.
pub fn config_hash(command: &str, config: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0u8]);
    h.update(serde_json::to_vec(config).expect("JSON values always serialize"));
    hex::encode(h.finalize())
}

/// A command's result: a flat table for CSV plus a structured JSON body.
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Structured result; defaults to the table as an array of objects.
    pub json: Option<Value>,
}

impl Report {
    pub fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            json: None,
        }
    }

    pub fn with_json(mut self, json: Value) -> Self {
        self.json = Some(json);
        self
    }

    fn json_body(&self) -> Value {
        self.json.clone().unwrap_or_else(|| {
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect())
                    })
                    .collect(),
            )
        })
    }
}

pub struct Provenance<'a> {
    pub command: &'a str,
    pub config_hash: String,
    pub seed: Option<u64>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, prov: &Provenance, format: Format) -> Result<Vec<u8>, CliError> {
    let seed = prov.seed.map_or(Value::Null, Value::from);
    match format {
        Format::Json => {
            let body = json!({
                "command": prov.command,
                "config_hash": prov.config_hash,
                "seed": seed,
                "result": report.json_body(),
            });
            let mut out = serde_json::to_vec_pretty(&body).expect("JSON values always serialize");
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = report.columns.clone();
            header.extend(["config_hash".to_string(), "seed".to_string()]);
            w.write_record(&header).map_err(io_err)?;
            let seed = cell(&seed);
            for row in &report.rows {
                let mut rec: Vec<String> = row.iter().map(cell).collect();
                rec.push(prov.config_hash.clone());
                rec.push(seed.clone());
                w.write_record(&rec).map_err(io_err)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// `[re, im]`.
pub fn cx(z: num_complex::Complex<f64>) -> Value {
    json!([z.re, z.im])
}

/// Matrix as rows of `[re, im]` pairs.
pub fn cmat(m: &levy_mart::linalg::CMat<f64>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| cx(m[(i, j)])).collect()))
            .collect(),
    )
}
