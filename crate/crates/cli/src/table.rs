//! Rectangular numeric tables with a metadata block, written as CSV or JSON.
//!
//! CSV layout: one `# key=value` comment line per metadata entry (sorted by
//! key), then a header row, then one row per record. Numbers are written with
//! 17 significant digits so they round-trip exactly; non-finite values are
//! written as `NaN`, `inf` and `-inf`. JSON uses the keys `columns`, `rows`
//! and `metadata`, with non-finite numbers as `null`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputTable {
    #[serde(rename = "columns")]
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
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

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl OutputTable {
    pub fn new(columns: &[&str]) -> Self {
        OutputTable {
            column_names: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.column_names.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_names.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                for (k, v) in &self.metadata {
                    // Keep each entry on one comment line.
                    writeln!(out, "# {k}={}", v.replace('\n', " "))?;
                }
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.column_names)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|&x| format_number(x)))?;
                }
                w.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}
