//! Tabular results shared by the sweeps and the command-line exports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Result};

/// Provenance attached to a table. Only `columns` and `rows` are covered by
/// the byte-reproducibility guarantee; the wall-clock field naturally varies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Echo of the configuration that produced the table.
    pub config: Value,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn new(config: Value) -> Self {
        Self { config, tool_version: env!("CARGO_PKG_VERSION").to_string(), ..Self::default() }
    }
}

/// Named columns of `f64` rows. Undefined entries are stored as NaN.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_number(x: f64) -> String {
    if x.is_finite() { number(x) } else { "null".to_string() }
}

impl SweepResult {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(invalid(format!("row has {} entries, table has {} columns", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn export(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Header row, then one line per row with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&x| number(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"metadata": ..., "columns": [...], "rows": [[...], ...]}` with one
    /// row per line; non-finite values become `null`.
    pub fn to_json(&self) -> String {
        let meta = serde_json::to_string(&self.metadata).expect("metadata serializes");
        let cols = serde_json::to_string(&self.columns).expect("column names serialize");
        let mut out = format!("{{\n\"metadata\": {meta},\n\"columns\": {cols},\n\"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&x| json_number(x)).collect();
            let sep = if i == 0 { "\n" } else { ",\n" };
            let _ = write!(out, "{sep}[{}]", cells.join(", "));
        }
        out.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n]\n}\n" });
        out
    }

    /// Data section only, as written by [`SweepResult::to_csv`].
    pub fn data_bytes(&self) -> Vec<u8> {
        self.to_csv().into_bytes()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| invalid("empty CSV"))?;
        let mut table = Self::new(header.split(',').filter(|s| !s.is_empty()));
        for line in lines.filter(|l| !l.is_empty()) {
            let row = line
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| invalid(format!("bad number {s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            metadata: Metadata,
            columns: Vec<String>,
            rows: Vec<Vec<Option<f64>>>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| invalid(format!("bad JSON table: {e}")))?;
        let mut table = Self::new(raw.columns);
        table.metadata = raw.metadata;
        for row in raw.rows {
            table.push(row.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())?;
        }
        Ok(table)
    }

    /// Exact equality of the numeric data, treating NaN as equal to NaN.
    pub fn same_data(&self, other: &Self) -> bool {
        self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
            })
    }
}
