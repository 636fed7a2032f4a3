//! Residual reports: one line per checked identity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub anchor: String,
    /// `None` when the computation itself failed; see `error`.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportItem {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let verdict = if residual <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            name: name.into(),
            anchor: anchor.into(),
            residual: residual.is_finite().then_some(residual),
            tolerance,
            verdict,
            error: (!residual.is_finite()).then(|| format!("non-finite residual {residual}")),
        }
    }

    pub fn failed(name: impl Into<String>, anchor: impl Into<String>, tolerance: f64, error: &Error) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            residual: None,
            tolerance,
            verdict: Verdict::Fail,
            error: Some(error.to_string()),
        }
    }

    pub fn from_result(
        name: impl Into<String>,
        anchor: impl Into<String>,
        residual: Result<f64, Error>,
        tolerance: f64,
    ) -> Self {
        match residual {
            Ok(r) => Self::new(name, anchor, r, tolerance),
            Err(e) => Self::failed(name, anchor, tolerance, &e),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool_version: String,
    pub grid: String,
    /// RFC 3339 time from SOURCE_DATE_EPOCH, or null so reruns stay byte-identical.
    pub timestamp: Option<String>,
    pub measurements: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub items: Vec<ReportItem>,
    pub metadata: Metadata,
}

impl ResidualReport {
    pub fn new(grid: impl Into<String>) -> Self {
        Self {
            items: Vec::new(),
            metadata: Metadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                grid: grid.into(),
                timestamp: source_date_timestamp(),
                measurements: BTreeMap::new(),
            },
        }
    }

    pub fn push(&mut self, item: ReportItem) {
        self.items.push(item);
    }

    pub fn measure(&mut self, key: impl Into<String>, value: f64) {
        self.metadata.measurements.insert(key.into(), value);
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.items.extend(other.items);
        self.metadata.measurements.extend(other.metadata.measurements);
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(ReportItem::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.passed())
    }
}

fn source_date_timestamp() -> Option<String> {
    let secs: i64 = std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()?;
    format_utc(secs)
}

fn format_utc(secs: i64) -> Option<String> {
    time::OffsetDateTime::from_unix_timestamp(secs)
        .ok()?
        .format(&time::format_description::well_known::Rfc3339)
        .ok()
}
