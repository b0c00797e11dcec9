//! Record stream: one JSON object per line, or CSV rows.

use std::io::Write;

use clap::ValueEnum;
use qk_core::comparison::ComparisonReport;
use qk_core::QkError;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

impl ErrorInfo {
    pub fn new(e: &QkError) -> Self {
        let kind = if e.is_size_cap() { "size-cap" } else { "invalid-input" };
        ErrorInfo {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Record {
    Banner {
        tool: &'static str,
        version: &'static str,
    },
    Report(ComparisonReport),
    Computation {
        name: String,
        inputs: Value,
        values: Vec<Value>,
    },
    Error {
        name: String,
        inputs: Value,
        error: ErrorInfo,
    },
    Summary {
        name: &'static str,
        total: usize,
        passed: usize,
        failed: usize,
        size_cap: usize,
        errors: usize,
    },
}

pub fn banner() -> Record {
    Record::Banner {
        tool: "qk",
        version: env!("CARGO_PKG_VERSION"),
    }
}

pub struct Sink {
    format: Format,
    json: Option<Box<dyn Write>>,
    csv: Option<csv::Writer<Box<dyn Write>>>,
}

const CSV_HEADER: [&str; 6] = ["kind", "name", "verdict", "left", "right", "extra"];

fn joined(values: &[impl Serialize]) -> String {
    values
        .iter()
        .map(|v| match serde_json::to_value(v).expect("serializable") {
            Value::String(s) => s,
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join(";")
}

impl Sink {
    pub fn new(format: Format, out: Box<dyn Write>) -> std::io::Result<Self> {
        Ok(match format {
            Format::Json => Sink {
                format,
                json: Some(out),
                csv: None,
            },
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_HEADER)?;
                Sink {
                    format,
                    json: None,
                    csv: Some(w),
                }
            }
        })
    }

    pub fn write(&mut self, record: &Record) -> std::io::Result<()> {
        match self.format {
            Format::Json => {
                let out = self.json.as_mut().expect("json sink");
                serde_json::to_writer(&mut *out, record)?;
                out.write_all(b"\n")
            }
            Format::Csv => {
                let row = csv_row(record);
                self.csv.as_mut().expect("csv sink").write_record(&row)?;
                Ok(())
            }
        }
    }

    pub fn flush(&mut self) -> std::io::Result<()> {
        match (&mut self.json, &mut self.csv) {
            (Some(w), _) => w.flush(),
            (_, Some(w)) => w.flush(),
            _ => Ok(()),
        }
    }
}

fn csv_row(record: &Record) -> [String; 6] {
    let s = String::new;
    match record {
        Record::Banner { tool, version } => ["banner".into(), (*tool).into(), s(), s(), s(), (*version).into()],
        Record::Report(r) => {
            let verdict = serde_json::to_value(r.verdict).expect("verdict");
            let extra = json!({ "inputs": r.inputs, "witness": r.witness, "checks": r.checks });
            [
                "report".into(),
                r.name.clone(),
                verdict.as_str().unwrap_or_default().into(),
                joined(&r.left),
                joined(&r.right),
                extra.to_string(),
            ]
        }
        Record::Computation { name, inputs, values } => {
            ["computation".into(), name.clone(), s(), joined(values), s(), inputs.to_string()]
        }
        Record::Error { name, inputs, error } => [
            "error".into(),
            name.clone(),
            error.kind.into(),
            s(),
            s(),
            json!({ "inputs": inputs, "message": error.message }).to_string(),
        ],
        Record::Summary {
            name,
            total,
            passed,
            failed,
            size_cap,
            errors,
        } => [
            "summary".into(),
            (*name).into(),
            s(),
            s(),
            s(),
            json!({ "total": total, "passed": passed, "failed": failed, "size_cap": size_cap, "errors": errors })
                .to_string(),
        ],
    }
}
