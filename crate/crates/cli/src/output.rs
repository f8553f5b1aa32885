//! CSV and JSON emission plus the run manifest.
//!
//! CSV uses `.` decimals, no grouping and `\n` line endings. JSON numbers
//! are written in shortest round-trip form. JSON documents are built as
//! `serde_json::Value` first, so keys come out sorted and reparsing then
//! reserializing reproduces the same bytes.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Format, OutputArgs};
use crate::error::CliError;

/// Significant digits in report CSV cells.
pub const REPORT_DIGITS: usize = 12;

/// `x` rounded to [`REPORT_DIGITS`] significant digits. Magnitudes below
/// `1e-4` or from `1e15` up switch to exponent notation.
pub fn report_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", REPORT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation parses");
    let magnitude = rounded.abs();
    if magnitude != 0.0 && !(1e-4..1e15).contains(&magnitude) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

/// `x` in shortest form that parses back to the same double.
pub fn data_number(x: f64) -> String {
    x.to_string()
}

/// Comma-separated table with a single header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Everything needed to rerun an invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: Value,
    pub master_seed: Option<u64>,
    pub generator: Option<&'static str>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, parameters: Value) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters,
            master_seed: None,
            generator: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.master_seed = Some(seed);
        self.generator = Some(pauli_estimation::GENERATOR_ID);
        self
    }
}

/// The result of one command in both output shapes.
pub struct Report {
    pub manifest: RunManifest,
    pub csv: CsvTable,
    /// Top-level JSON members next to `manifest`, e.g. `rows` or `summary`.
    pub json: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn json_document(&self) -> Value {
        let mut doc = json!({ "manifest": to_value(&self.manifest) });
        for (key, value) in &self.json {
            doc[*key] = value.clone();
        }
        doc
    }
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize to JSON")
}

pub fn render_json(doc: &Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON value renders");
    text.push('\n');
    text
}

/// Path of the manifest written next to a CSV file.
pub fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes the report to its target.
///
/// JSON embeds the manifest. A CSV file gets a `<file>.manifest.json`
/// sidecar; CSV on standard output has its manifest echoed as a single
/// `manifest:` line on standard error.
pub fn emit(report: &Report, target: &OutputArgs) -> Result<(), CliError> {
    let body = match target.format {
        Format::Csv => report.csv.render(),
        Format::Json => render_json(&report.json_document()),
    };
    match &target.output {
        Some(path) => {
            write_file(path, &body)?;
            if target.format == Format::Csv {
                write_file(&manifest_path(path), &render_json(&to_value(&report.manifest)))?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            if target.format == Format::Csv {
                let manifest = serde_json::to_string(&to_value(&report.manifest)).expect("JSON value renders");
                eprintln!("manifest: {manifest}");
            }
        }
    }
    Ok(())
}
