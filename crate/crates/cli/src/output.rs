use std::collections::BTreeMap;

use clap::ValueEnum;
use hilbert_spectra::report::ResidualReport;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Named numeric columns plus free-form metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }
}

pub enum Output {
    Table(Table),
    Report(ResidualReport),
}

impl Output {
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => {
                let s = match self {
                    Output::Table(t) => serde_json::to_string_pretty(t),
                    Output::Report(r) => serde_json::to_string_pretty(r),
                };
                s.map(|s| s + "\n").map_err(|e| e.to_string())
            }
            Format::Csv => self.csv().map_err(|e| e.to_string()),
        }
    }

    fn csv(&self) -> Result<String, Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self {
            Output::Table(t) => {
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(|v| v.to_string()))?;
                }
            }
            Output::Report(r) => {
                w.write_record(["name", "anchor", "residual", "tolerance", "verdict", "error"])?;
                for item in &r.items {
                    w.write_record([
                        item.name.clone(),
                        item.anchor.clone(),
                        item.residual.map_or(String::new(), |v| v.to_string()),
                        item.tolerance.to_string(),
                        if item.passed() { "pass" } else { "fail" }.to_string(),
                        item.error.clone().unwrap_or_default(),
                    ])?;
                }
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}
