//! Experiment reports and their serialisations.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One trial: `ratio = lhs / rhs`; `control` is the same data under a
/// scaling that is expected to fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub trial: usize,
    pub group: String,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub control: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub group: String,
    pub count: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub median_ratio: f64,
    pub max_control: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Reported without entering the overall verdict.
    pub exploratory: bool,
    pub note: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
            exploratory: false,
            note: note.into(),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value >= threshold,
            exploratory: false,
            note: note.into(),
        }
    }

    pub fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }
}

/// A point `(x, y)` of a named series for plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub rows: Vec<Row>,
    pub aggregates: Vec<Aggregate>,
    pub checks: Vec<Check>,
    pub curve: Vec<CurvePoint>,
    pub environment: Environment,
    pub passed: bool,
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k == 0 {
        return 0.0;
    }
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

/// Per-group statistics, groups in order of first appearance.
pub fn aggregate(rows: &[Row]) -> Vec<Aggregate> {
    let mut order: Vec<String> = Vec::new();
    for r in rows {
        if !order.contains(&r.group) {
            order.push(r.group.clone());
        }
    }
    order
        .into_iter()
        .map(|g| {
            let mut ratios: Vec<f64> = rows.iter().filter(|r| r.group == g).map(|r| r.ratio).collect();
            ratios.sort_by(f64::total_cmp);
            let controls: Vec<f64> = rows
                .iter()
                .filter(|r| r.group == g)
                .filter_map(|r| r.control)
                .collect();
            Aggregate {
                count: ratios.len(),
                max_ratio: ratios.last().copied().unwrap_or(0.0),
                min_ratio: ratios.first().copied().unwrap_or(0.0),
                median_ratio: median(&ratios),
                max_control: controls.iter().copied().reduce(f64::max),
                group: g,
            }
        })
        .collect()
}

impl Report {
    pub fn new(experiment: impl Into<String>, seed: u64, config: serde_json::Value) -> Self {
        Report {
            experiment: experiment.into(),
            seed,
            config,
            rows: Vec::new(),
            aggregates: Vec::new(),
            checks: Vec::new(),
            curve: Vec::new(),
            environment: Environment::default(),
            passed: true,
        }
    }

    /// Recomputes aggregates and the overall verdict.
    pub fn finalize(mut self) -> Self {
        self.rows.sort_by_key(|r| r.trial);
        self.aggregates = aggregate(&self.rows);
        self.passed = self.checks.iter().filter(|c| !c.exploratory).all(|c| c.passed);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    GnuplotDat,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [Self::Json, Self::Csv, Self::GnuplotDat];

    pub fn file_name(self) -> &'static str {
        match self {
            Self::Json => "report.json",
            Self::Csv => "rows.csv",
            Self::GnuplotDat => "curve.dat",
        }
    }
}

/// CSV columns of [`Row`]; `inputs` is `key=value` pairs joined by `;`.
pub const CSV_COLUMNS: [&str; 7] = ["trial", "group", "lhs", "rhs", "ratio", "control", "inputs"];

fn csv_bytes(r: &Report) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for row in &r.rows {
        let inputs: Vec<String> = row.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        w.write_record([
            row.trial.to_string(),
            row.group.clone(),
            row.lhs.to_string(),
            row.rhs.to_string(),
            row.ratio.to_string(),
            row.control.map(|c| c.to_string()).unwrap_or_default(),
            inputs.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Series as gnuplot index blocks: a `# series` comment, then `x y` lines,
/// blocks separated by two blank lines.
fn dat_bytes(r: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    let mut current: Option<&str> = None;
    for p in &r.curve {
        if current != Some(p.series.as_str()) {
            if current.is_some() {
                out.extend_from_slice(b"\n\n");
            }
            writeln!(out, "# {}", p.series).expect("write to Vec");
            current = Some(p.series.as_str());
        }
        writeln!(out, "{} {}", p.x, p.y).expect("write to Vec");
    }
    out
}

/// Writes `r` in `format` under `dir` and returns the file path.
pub fn emit_report(r: &Report, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format.file_name());
    let bytes = match format {
        ReportFormat::Json => {
            let mut s = r.to_json()?;
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Csv => csv_bytes(r)?,
        ReportFormat::GnuplotDat => dat_bytes(r),
    };
    fs::write(&path, bytes)?;
    Ok(path)
}

/// All three formats.
pub fn emit_all(r: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    ReportFormat::ALL.iter().map(|&f| emit_report(r, f, dir)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", 3, serde_json::json!({"n": 1}));
        for t in 0..4 {
            r.rows.push(Row {
                trial: 3 - t,
                group: if t % 2 == 0 { "a".into() } else { "b".into() },
                inputs: BTreeMap::from([("delta".to_string(), 0.1 * t as f64)]),
                lhs: t as f64,
                rhs: 2.0,
                ratio: t as f64 / 2.0,
                control: if t == 0 { None } else { Some(1.0) },
            });
        }
        r.curve.push(CurvePoint { series: "s".into(), x: 1.0, y: 2.0 });
        r.checks.push(Check::at_most("c", 1.0, 2.0, ""));
        r.finalize()
    }

    #[test]
    fn aggregates_and_order() {
        let r = sample();
        assert_eq!(r.rows[0].trial, 0);
        let a = &r.aggregates;
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].group, "b");
        assert_eq!(a[0].count, 2);
        assert!(r.passed);
    }

    #[test]
    fn files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        let paths = emit_all(&r, dir.path()).unwrap();
        let back = Report::from_json(&fs::read_to_string(&paths[0]).unwrap()).unwrap();
        assert_eq!(back, r);
        let csv = fs::read_to_string(&paths[1]).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(reader.headers().unwrap().len(), CSV_COLUMNS.len());
        for rec in reader.records() {
            assert_eq!(rec.unwrap().len(), CSV_COLUMNS.len());
        }
    }

    #[test]
    fn empty_report_files() {
        let dir = tempfile::tempdir().unwrap();
        let r = Report::new("empty", 0, serde_json::Value::Null).finalize();
        let paths = emit_all(&r, dir.path()).unwrap();
        let back = Report::from_json(&fs::read_to_string(&paths[0]).unwrap()).unwrap();
        assert!(back.rows.is_empty());
        assert_eq!(fs::read_to_string(&paths[1]).unwrap().lines().count(), 1);
        assert!(fs::read_to_string(&paths[2]).unwrap().is_empty());
    }
}
