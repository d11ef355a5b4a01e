use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Configuration echo and provenance. Wall time is deliberately absent so
/// that identical runs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub artifact: String,
    pub version: String,
    pub kind: String,
    pub n: usize,
    pub reps: usize,
    pub dist: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// Per-replicate statistics, in the column order of [`Report::columns`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub replicate: u64,
    pub seed: u64,
    /// `None` where the value is undefined (including failed replicates).
    pub values: Vec<Option<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    LessThan,
    GreaterThan,
    AtMost,
}

/// A statistic compared with a configured threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statistic: Option<f64>,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, statistic: f64, comparison: Comparison, threshold: f64) -> Self {
        let passed = statistic.is_finite()
            && match comparison {
                Comparison::LessThan => statistic < threshold,
                Comparison::GreaterThan => statistic > threshold,
                Comparison::AtMost => statistic <= threshold,
            };
        Check { name: name.into(), statistic: finite(statistic), comparison, threshold, passed }
    }

    /// A yes/no property, recorded as statistic 1 (true) or 0 (false).
    pub fn flag(name: &str, holds: bool) -> Self {
        Check {
            name: name.into(),
            statistic: Some(if holds { 1.0 } else { 0.0 }),
            comparison: Comparison::GreaterThan,
            threshold: 0.5,
            passed: holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub estimates: Vec<Estimate>,
    pub checks: Vec<Check>,
    pub failed_replicates: usize,
    pub passed: bool,
}

impl Summary {
    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.estimates.iter().find(|e| e.name == name).and_then(|e| e.value)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Columns for plotting tools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub plot: PlotTable,
}

pub(crate) fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn fmt_value(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_else(|| "nan".into())
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Io(format!("invalid report JSON: {e}")))
    }

    /// Header `replicate,seed,<columns>,error` and one line per replicate.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("replicate,seed");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push_str(",error\n");
        for r in &self.rows {
            let _ = write!(out, "{},{}", r.replicate, r.seed);
            for v in &r.values {
                out.push(',');
                out.push_str(&fmt_value(*v));
            }
            out.push(',');
            if let Some(e) = &r.error {
                out.push('"');
                out.push_str(&e.replace('"', "'"));
                out.push('"');
            }
            out.push('\n');
        }
        out
    }

    /// Whitespace-separated columns with a `#` header line.
    pub fn to_plot(&self) -> String {
        let mut out = format!("# {}\n", self.plot.columns.join(" "));
        for row in &self.plot.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_value(*v)).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Values of one per-replicate column, skipping undefined entries.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().filter_map(|r| r.values[idx]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_report() -> Report {
        Report {
            metadata: Metadata {
                artifact: "rmtlab".into(),
                version: "0".into(),
                kind: "semicircle".into(),
                n: 3,
                reps: 2,
                dist: "gaussian".into(),
                seed: u64::MAX,
                params: BTreeMap::from([("tol".into(), "0.02".into())]),
                warnings: vec![],
            },
            columns: vec!["a".into(), "b".into()],
            rows: vec![
                Row { replicate: 0, seed: 1, values: vec![Some(0.1), Some(-2.5e-17)], error: None },
                Row { replicate: 1, seed: 2, values: vec![None, None], error: Some("boom \"x\"".into()) },
            ],
            summary: Summary {
                estimates: vec![Estimate { name: "m".into(), value: Some(1.0 / 3.0), std_error: None }],
                checks: vec![Check::new("ks", 0.01, Comparison::LessThan, 0.02)],
                failed_replicates: 1,
                passed: true,
            },
            plot: PlotTable { columns: vec!["t".into(), "y".into()], rows: vec![vec![Some(0.0), Some(0.5)]] },
        }
    }

    #[test]
    fn json_round_trips_bytes() {
        let r = tiny_report();
        let a = r.to_json().unwrap();
        let b = Report::from_json(&a).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert_eq!(Report::from_json(&a).unwrap(), r);
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let csv = tiny_report().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "replicate,seed,a,b,error");
        assert!(lines[2].ends_with("\"boom 'x'\""));
    }

    #[test]
    fn checks_compare() {
        assert!(Check::new("x", 1.0, Comparison::AtMost, 1.0).passed);
        assert!(!Check::new("x", 1.0, Comparison::LessThan, 1.0).passed);
        assert!(!Check::new("x", f64::NAN, Comparison::GreaterThan, 0.0).passed);
        assert!(Check::flag("y", true).passed);
    }
}
