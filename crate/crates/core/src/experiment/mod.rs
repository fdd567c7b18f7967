//! Seeded experiments that measure the perturbation bounds on random
//! commuting tuples, and their reports.

pub mod config;
pub mod gen;
pub mod hoelder;
pub mod kontr;
pub mod lipschitz;
pub mod presets;
pub mod report;
pub mod schatten;

use std::collections::BTreeMap;
use std::path::PathBuf;

pub use config::{DeltaSpec, ExperimentConfig, GridSpec, ModulusSpec, EXPERIMENTS};
pub use gen::{
    gen_commuting_tuple, gen_pair, gen_perturbed_pair, haar_unitary, sub_seed, tuple_distance, tuple_from,
    unitary_exp, PairSpec, PerturbMode, PerturbedPair, SpectrumBox,
};
pub use hoelder::{run_hoelder_experiment, run_omega_experiment};
pub use kontr::{kontr_grids, run_kontr_experiment};
pub use lipschitz::{run_lipschitz_experiment, run_lipschitz_with};
pub use presets::{cone, preset, KontrFunction, PresetParams, PRESETS};
pub use report::{emit_all, emit_report, Aggregate, Check, CurvePoint, Environment, Report, ReportFormat, Row, CSV_COLUMNS};
pub use schatten::run_schatten_experiment;

use crate::calculus::{apply_function, RnFunction};
use crate::error::Result;
use crate::spectral::{joint_diagonalize_default, CMatrix};

/// Dispatches on `cfg.experiment`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.experiment.as_str() {
        "lipschitz" => run_lipschitz_experiment(cfg),
        "hoelder" => run_hoelder_experiment(cfg),
        "omega" => run_omega_experiment(cfg),
        "schatten" => run_schatten_experiment(cfg),
        "kontr" => run_kontr_experiment(cfg),
        _ => unreachable!("validated"),
    }
}

/// `out/{experiment}`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out.join(&cfg.experiment)
}

/// `f(A) - f(B)`.
pub(crate) fn difference(f: &dyn RnFunction, pair: &PerturbedPair) -> Result<CMatrix> {
    let ja = joint_diagonalize_default(&pair.a)?;
    let jb = joint_diagonalize_default(&pair.b)?;
    Ok(&apply_function(&ja, f)? - &apply_function(&jb, f)?)
}

/// `num / den`, with `0 / 0 = 0`.
pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub(crate) fn config_value(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serialises")
}

/// Maximum of `value` per `level` input within `group`, by increasing level.
pub(crate) fn level_maxima(rows: &[Row], group: &str, value: impl Fn(&Row) -> f64) -> Vec<(f64, f64)> {
    let mut by_level: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.group == group) {
        let level = r.inputs["level"];
        let target = r.inputs["delta_target"];
        let v = value(r);
        let e = by_level.entry(level as u64).or_insert((target, v));
        e.1 = e.1.max(v);
    }
    by_level.into_values().collect()
}

/// `max / min` over the level maxima.
pub(crate) fn band(levels: &[(f64, f64)]) -> f64 {
    let hi = levels.iter().map(|l| l.1).fold(0.0, f64::max);
    let lo = levels.iter().map(|l| l.1).fold(f64::INFINITY, f64::min);
    if hi == 0.0 {
        1.0
    } else {
        hi / lo
    }
}

/// Level maximum at the smallest target over the one at the largest.
pub(crate) fn growth(levels: &[(f64, f64)]) -> f64 {
    match (levels.first(), levels.last()) {
        (Some(a), Some(b)) => ratio(a.1, b.1),
        _ => 0.0,
    }
}

/// Band and control-growth checks plus curve points for one group of a
/// scaling experiment.
pub(crate) fn scaling_checks(report: &mut Report, group: &str, control_name: &str, exploratory: bool) {
    let levels = level_maxima(&report.rows, group, |r| r.ratio);
    let controls = level_maxima(&report.rows, group, |r| r.control.unwrap_or(0.0));
    for &(d, v) in &levels {
        report.curve.push(CurvePoint { series: group.to_string(), x: d, y: v });
    }
    for &(d, v) in &controls {
        report.curve.push(CurvePoint { series: format!("{group}/control"), x: d, y: v });
    }
    let mut b = Check::at_most(
        format!("{group}: ratio band"),
        band(&levels),
        10.0,
        "largest over smallest per-level maximum ratio",
    );
    let mut g = Check::at_least(
        format!("{group}: control growth"),
        growth(&controls),
        10.0,
        format!("{control_name} at the smallest delta over the largest"),
    );
    if exploratory {
        b = b.exploratory();
        g = g.exploratory();
    }
    report.checks.push(b);
    report.checks.push(g);
}
