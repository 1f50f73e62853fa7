//! Experiment configuration, runner, reports and comparison.

mod config;
mod csv;
mod run;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use config::{Criterion, ExperimentConfig, Grids, OutputFormat, OutputSpec, Space};
pub use csv::{parse_csv, report_csv, report_tables, CsvTable};
pub use run::{cantor_windows, run};

use crate::diagnostics::{TheoremTag, Verdict};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub space: Space,
    pub theorem_tag: TheoremTag,
    /// The grids this result was computed on.
    pub grids: Value,
    pub values: Value,
    /// Headline numbers, also collected into the report baselines.
    pub summary: BTreeMap<String, f64>,
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    /// Conventions the numbers depend on.
    pub notes: Vec<String>,
    pub results: Vec<CriterionResult>,
    /// `criterion.key -> value` for every summary entry.
    pub baselines: BTreeMap<String, f64>,
    pub wall_clock_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with the wall-clock field zeroed, for byte comparison of runs.
    pub fn to_canonical_json(&self) -> Result<String> {
        let mut r = self.clone();
        r.wall_clock_ms = 0;
        r.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text)?;
        let version = raw.get("schema_version").and_then(Value::as_u64);
        if version != Some(SCHEMA_VERSION as u64) {
            return Err(Error::Version(format!(
                "report schema version {version:?} is not supported (expected {SCHEMA_VERSION})"
            )));
        }
        Ok(serde_json::from_value(raw)?)
    }

    pub fn result(&self, criterion: Criterion) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.criterion == criterion)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub key: String,
    pub values: Vec<Option<f64>>,
    /// Largest `|v_i − v_0| / |v_0|` over reports (absolute difference when `v_0 = 0`).
    pub max_relative_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub criterion: Criterion,
    pub verdicts: Vec<Option<Verdict>>,
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub report_count: usize,
    pub rows: Vec<ComparisonRow>,
    pub verdicts: Vec<VerdictRow>,
}

impl Comparison {
    pub fn verdicts_identical(&self) -> bool {
        self.verdicts.iter().all(|v| v.identical)
    }

    pub fn row(&self, key: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.key == key)
    }

    /// Whether every value and verdict agrees exactly.
    pub fn is_identical(&self) -> bool {
        self.verdicts_identical()
            && self.rows.iter().all(|r| r.values.iter().all(|v| *v == r.values[0]))
    }

    /// Fixed-width text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<36}", "key");
        for i in 0..self.report_count {
            let _ = write!(out, " {:>22}", format!("report {}", i + 1));
        }
        let _ = writeln!(out, " {:>14}", "max rel change");
        let cell = |v: &Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.10e}"));
        for row in &self.rows {
            let _ = write!(out, "{:<36}", row.key);
            for v in &row.values {
                let _ = write!(out, " {:>22}", cell(v));
            }
            let _ = writeln!(out, " {:>14}", row.max_relative_change.map_or("-".into(), |x| format!("{x:.3e}")));
        }
        for row in &self.verdicts {
            let _ = write!(out, "{:<36}", format!("{}.verdict", row.criterion));
            for v in &row.verdicts {
                let _ = write!(out, " {:>22}", v.map_or("-", Verdict::as_str));
            }
            let _ = writeln!(out, " {:>14}", if row.identical { "same" } else { "DIFFERENT" });
        }
        out
    }
}

/// Side-by-side baselines and verdicts of two or more reports.
pub fn compare(reports: &[Report]) -> Result<Comparison> {
    if reports.len() < 2 {
        return Err(Error::Parameter(format!("compare needs at least 2 reports, got {}", reports.len())));
    }
    let version = reports[0].schema_version;
    if let Some(r) = reports.iter().find(|r| r.schema_version != version) {
        return Err(Error::Version(format!(
            "schema versions differ: {version} and {}",
            r.schema_version
        )));
    }
    let keys: BTreeSet<&String> = reports.iter().flat_map(|r| r.baselines.keys()).collect();
    let rows = keys
        .into_iter()
        .map(|key| {
            let values: Vec<Option<f64>> = reports.iter().map(|r| r.baselines.get(key).copied()).collect();
            let max_relative_change = values[0].and_then(|base| {
                values[1..]
                    .iter()
                    .map(|v| {
                        v.map(|x| {
                            let diff = (x - base).abs();
                            if base == 0.0 { diff } else { diff / base.abs() }
                        })
                    })
                    .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))
            });
            ComparisonRow { key: key.clone(), values, max_relative_change }
        })
        .collect();
    let criteria: BTreeSet<Criterion> = reports.iter().flat_map(|r| r.results.iter().map(|x| x.criterion)).collect();
    let verdicts = criteria
        .into_iter()
        .map(|criterion| {
            let verdicts: Vec<Option<Verdict>> = reports
                .iter()
                .map(|r| r.result(criterion).and_then(|x| x.verdict))
                .collect();
            let identical = verdicts.iter().all(|v| *v == verdicts[0]);
            VerdictRow { criterion, verdicts, identical }
        })
        .collect();
    Ok(Comparison { report_count: reports.len(), rows, verdicts })
}
