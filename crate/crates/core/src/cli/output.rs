//! JSON and CSV rendering of command results.

use clap::ValueEnum;
use serde::Serialize;

use super::Outcome;
use crate::decomposition::{ClusterSplit, Component, decompose};
use crate::error::Result;
use crate::gumbel::{GumbelTest, cluster_test};
use crate::montecarlo::MonteCarloReport;
use crate::montecarlo::lemmas::LemmaCheckReport;
use crate::projection::ProjectionScan;
use crate::spacings::Sample;

const TOP_COMPONENTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// CSV header plus data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// A command result ready to print.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Rendered {
    pub fn ok<T: Serialize + ?Sized>(format: Format, value: &T, table: Table) -> Self {
        let stdout = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
                s.push('\n');
                s
            }
            Format::Csv => table.to_csv(),
        };
        Rendered {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn finish(self) -> Result<Outcome> {
        Ok(Outcome {
            code: self.code,
            stdout: self.stdout,
            stderr: self.stderr,
        })
    }
}

/// Shortest round-trip text for `x`, in exponent form outside [1e-4, 1e15).
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn kv(pairs: Vec<(&str, String)>) -> Table {
    Table {
        header: vec!["key", "value"],
        rows: pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population variance (divisor n).
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionOutput {
    pub split: ClusterSplit,
    pub test: GumbelTest,
    /// Largest standardized components, strongest first.
    pub top_components: Vec<Component>,
    pub input_digest: InputDigest,
}

impl DetectionOutput {
    pub fn from_series(values: &[f64]) -> Result<Self> {
        let sample = Sample::new(values)?;
        let d = decompose(&sample)?;
        let split = crate::decomposition::cluster_index(&d, &sample)?;
        let test = cluster_test(sample.len(), split.statistic)?;
        let mut top = d.components.clone();
        // Stable sort keeps the smaller index first among equal components.
        top.sort_by(|a, b| b.standardized.total_cmp(&a.standardized));
        top.truncate(TOP_COMPONENTS);
        Ok(DetectionOutput {
            split,
            test,
            top_components: top,
            input_digest: InputDigest {
                count: sample.len(),
                min: sample.min(),
                max: sample.max(),
                mean: sample.mean(),
                variance: sample.variance(),
            },
        })
    }
}

pub fn detection_rows(d: &DetectionOutput) -> Table {
    kv(vec![
        ("n", d.test.n.to_string()),
        ("j", d.split.j.to_string()),
        ("statistic", num(d.split.statistic)),
        ("gumbel_x", num(d.test.x)),
        ("p_value", num(d.test.p_value)),
        ("separator_low", num(d.split.separator_low)),
        ("separator_high", num(d.split.separator_high)),
        ("cluster1_size", d.split.cluster1.len().to_string()),
        ("cluster2_size", d.split.cluster2.len().to_string()),
    ])
}

pub fn simulation_rows(r: &MonteCarloReport) -> Table {
    Table {
        header: vec!["x", "empirical_cdf", "reference_cdf"],
        rows: r
            .config
            .grid
            .iter()
            .zip(&r.empirical_cdf)
            .zip(&r.reference_cdf)
            .map(|((&x, &e), &f)| vec![num(x), num(e), num(f)])
            .collect(),
    }
}

pub fn lemma_table(reports: &[LemmaCheckReport]) -> Table {
    let mut rows = Vec::new();
    for r in reports {
        for c in &r.cases {
            let params: Vec<String> = c.parameters.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
            rows.push(vec![
                r.check.clone(),
                c.label.clone(),
                params.join(";"),
                num(c.observed),
                num(c.reference),
                num(c.standard_error),
                c.pass.to_string(),
            ]);
        }
    }
    Table {
        header: vec!["check", "case", "parameters", "observed", "reference", "standard_error", "pass"],
        rows,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectOutput {
    pub direction: Vec<f64>,
    pub direction_index: usize,
    pub split: ClusterSplit,
    pub test: GumbelTest,
    pub directions_tried: usize,
    pub directions_skipped: usize,
    pub note: &'static str,
}

impl ProjectOutput {
    pub fn new(scan: ProjectionScan) -> Result<Self> {
        Ok(ProjectOutput {
            direction: scan.direction,
            direction_index: scan.direction_index,
            split: scan.split,
            test: scan.test,
            directions_tried: scan.directions_tried,
            directions_skipped: scan.directions_skipped,
            note: "p_value is per direction; no correction for the number of directions tried",
        })
    }
}

pub fn project_rows(p: &ProjectOutput) -> Table {
    let direction: Vec<String> = p.direction.iter().map(|&v| num(v)).collect();
    kv(vec![
        ("direction", direction.join(";")),
        ("direction_index", p.direction_index.to_string()),
        ("j", p.split.j.to_string()),
        ("statistic", num(p.split.statistic)),
        ("p_value", num(p.test.p_value)),
        ("directions_tried", p.directions_tried.to_string()),
        ("directions_skipped", p.directions_skipped.to_string()),
    ])
}
