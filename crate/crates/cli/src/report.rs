//! Machine-readable run artifacts: a JSON report plus plot-ready CSV tables,
//! all numeric content in fixed scientific notation for reproducibility.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use framebundle::propagate::ObservableTrace;

use crate::config::ResolvedConfig;

/// C-style `%.12e` formatting: deterministic, cross-run byte-identical.
pub fn sci12(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000e+00".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
    Within,
}

/// One named measurement with its gate.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            tolerance,
            comparison: Comparison::AtMost,
            pass: measured.is_finite() && measured <= tolerance,
            note: None,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            tolerance,
            comparison: Comparison::AtLeast,
            pass: measured.is_finite() && measured >= tolerance,
            note: None,
        }
    }

    /// |measured − target| ≤ tolerance, recorded as the absolute deviation.
    pub fn within(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let dev = (measured - target).abs();
        CheckResult {
            name: name.into(),
            measured: dev,
            tolerance,
            comparison: Comparison::Within,
            pass: dev.is_finite() && dev <= tolerance,
            note: Some(format!(
                "value {} vs target {}",
                sci12(measured),
                sci12(target)
            )),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A check that could not be evaluated counts as failed, not crashed.
    pub fn errored(name: impl Into<String>, tolerance: f64, err: impl std::fmt::Display) -> Self {
        CheckResult {
            name: name.into(),
            measured: f64::NAN,
            tolerance,
            comparison: Comparison::AtMost,
            pass: false,
            note: Some(format!("evaluation failed: {err}")),
        }
    }
}

/// A small named table (e.g. residual vs h) for external plotting.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub name: String,
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub config: ResolvedConfig,
    pub checks: Vec<CheckResult>,
    pub convergence: Vec<ConvergenceTable>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub wall_time_s: f64,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(config: ResolvedConfig) -> Self {
        RunReport {
            scenario: config.scenario.name().to_string(),
            config,
            checks: Vec::new(),
            convergence: Vec::new(),
            notes: Vec::new(),
            pass: true,
            artifacts: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn finish(&mut self, wall_time_s: f64) {
        self.wall_time_s = wall_time_s;
    }
}

/// Writes artifacts under the output directory, tracking their names in the
/// report.
pub struct ArtifactWriter {
    dir: PathBuf,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(ArtifactWriter {
            dir: dir.to_path_buf(),
        })
    }

    pub fn write_csv(
        &self,
        report: &mut RunReport,
        name: &str,
        header: &[&str],
        rows: &[Vec<f64>],
    ) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        let mut out = String::new();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|&v| sci12(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?;
        report.artifacts.push(name.to_string());
        Ok(())
    }

    /// Trace CSV with the standard column layout (1D drops the y columns).
    pub fn write_trace(
        &self,
        report: &mut RunReport,
        name: &str,
        trace: &ObservableTrace,
    ) -> anyhow::Result<()> {
        if trace.is_empty() {
            report.note(format!("trace '{name}' was empty; no file written"));
            return Ok(());
        }
        let dims = trace.points[0].mean_x.len();
        let header: Vec<&str> = if dims == 1 {
            vec!["t", "norm", "mean_x", "mean_px", "energy", "fidelity"]
        } else {
            vec![
                "t", "norm", "mean_x", "mean_y", "mean_px", "mean_py", "energy", "fidelity",
            ]
        };
        let rows: Vec<Vec<f64>> = trace
            .points
            .iter()
            .map(|p| {
                let mut row = vec![p.t, p.norm];
                row.extend(&p.mean_x);
                row.extend(&p.mean_p);
                row.push(p.energy);
                row.push(p.fidelity);
                row
            })
            .collect();
        self.write_csv(report, name, &header, &rows)
    }

    pub fn write_report(&self, report: &RunReport) -> anyhow::Result<PathBuf> {
        let path = self.dir.join("report.json");
        let json = serde_json::to_string_pretty(report).context("serializing report")?;
        fs::write(&path, json).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
