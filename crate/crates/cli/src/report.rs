//! Report envelope written by every job, and its CSV view.

use hs_core::quad::Tolerance;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::job::JobSpec;

pub const TOOL: &str = "hs";

/// Rows of plain values; the CSV output is exactly this table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Numbers are written with the same digits as in the JSON report.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        if self.columns.is_empty() {
            return Ok(String::new());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Number for a table cell; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Member,
    Exceptional,
    Rejected,
    Failed,
    UsageError,
    NonConverged,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::Member | Outcome::Exceptional => 0,
            Outcome::Rejected | Outcome::Failed => 1,
            Outcome::UsageError => 2,
            Outcome::NonConverged | Outcome::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    /// The job as run, with file inputs inlined and defaults filled in.
    pub job: JobSpec,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub max_radius: f64,
    pub verdict: Outcome,
    pub exit_code: i32,
    pub diagnostic: Option<String>,
    pub results: Value,
    pub table: Table,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
