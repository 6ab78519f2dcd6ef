use std::path::Path;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use treebound::harness::SCHEMA_VERSION;
use treebound::{Error, WorkCap};

pub const WORK_CAP_ENV: &str = "TREEBOUND_WORK_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command that produced no payload, and its exit code. Invariant
/// failures still print a payload and exit 1 via [`Report::failed`].
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    WorkCap(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::WorkCap(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::WorkCap(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse { .. } | Error::InvalidGraph(_) | Error::InvalidTree(_) => Failure::Input(msg),
            Error::WorkCapExceeded { .. } | Error::RetryCapExceeded { .. } => Failure::WorkCap(msg),
            Error::InvalidLabeling(_) | Error::InvalidEmbedding(_) | Error::Precondition(_) => Failure::Usage(msg),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    /// SHA-256 of the file contents; absent for presets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Command output: a JSON payload plus its flat CSV rendering.
pub struct Report {
    pub payload: Value,
    pub csv: String,
    /// Set when an asserted invariant failed (exit 1 after printing).
    pub failed: bool,
}

impl Report {
    pub fn new(payload: impl Serialize, csv: String) -> Result<Self, Failure> {
        let payload = serde_json::to_value(payload).map_err(|e| Failure::Usage(format!("serialize: {e}")))?;
        Ok(Report { payload, csv, failed: false })
    }
}

pub struct Invocation {
    argv: Vec<String>,
    format: Format,
    inputs: Vec<InputDigest>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a [String],
    inputs: &'a [InputDigest],
    payload: &'a Value,
    elapsed_ms: f64,
}

impl Invocation {
    pub fn new(argv: Vec<String>, format: Format) -> Self {
        Invocation { argv, format, inputs: Vec::new() }
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            role: role.into(),
            source: path.display().to_string(),
            sha256: Some(sha256_hex(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{}: not utf-8", path.display())))
    }

    pub fn record_preset(&mut self, role: &str, preset: &str) {
        self.inputs.push(InputDigest { role: role.into(), source: preset.into(), sha256: None });
    }

    pub fn emit(&self, report: Report, elapsed: Duration) -> Result<(), Failure> {
        match self.format {
            Format::Json => {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command: &self.argv,
                    inputs: &self.inputs,
                    payload: &report.payload,
                    elapsed_ms: elapsed.as_secs_f64() * 1e3,
                };
                let text = serde_json::to_string_pretty(&env).map_err(|e| Failure::Usage(e.to_string()))?;
                println!("{text}");
            }
            Format::Csv => {
                print!("{}", report.csv);
                eprintln!("elapsed_ms={:.3}", elapsed.as_secs_f64() * 1e3);
            }
        }
        Ok(())
    }
}

pub fn work_cap() -> Result<WorkCap, Failure> {
    match std::env::var(WORK_CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(WorkCap)
            .map_err(|_| Failure::Usage(format!("{WORK_CAP_ENV} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(WorkCap::DEFAULT),
    }
}

/// Renders a header and rows as CSV.
pub fn table<R, I>(headers: &[&str], rows: R) -> Result<String, Failure>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Usage(format!("csv: {e}"));
    w.write_record(headers).map_err(err)?;
    for row in rows {
        w.write_record(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A log value as printed in CSV cells.
pub fn log_cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => treebound::numeric::sig15(v).to_string(),
        _ => String::new(),
    }
}
