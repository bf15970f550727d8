//! Tabular results with a reproducibility header, written as CSV.
//!
//! Layout: a `# scenario=<hash> seed=<n> version=<v>` line, a header row,
//! then one row per value of the swept variable (the first column).

use std::io::Write;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepMetadata {
    pub scenario_hash: String,
    pub seed: u64,
    pub version: String,
}

impl SweepMetadata {
    /// Metadata for a run described by `scenario` (any canonical text).
    pub fn new(scenario: &str, seed: u64) -> Self {
        Self { scenario_hash: scenario_hash(scenario), seed, version: env!("CARGO_PKG_VERSION").to_string() }
    }

    pub fn header_line(&self) -> String {
        format!("# scenario={} seed={} version={}", self.scenario_hash, self.seed, self.version)
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn scenario_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(digest)[..16].to_string()
}

/// Keeps the underlying I/O error kind visible to callers.
fn io_error(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepResult {
    pub fn new<S: Into<String>>(metadata: SweepMetadata, columns: impl IntoIterator<Item = S>) -> Self {
        Self { metadata, columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension(format!("row has {} values, expected {}", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Stable sort by the swept variable.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| a[0].total_cmp(&b[0]));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.metadata.header_line())?;
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns).map_err(io_error)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(f64::to_string)).map_err(io_error)?;
        }
        writer.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}
