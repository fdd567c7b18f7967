//! Operator Lipschitz bound for band-limited functions.

use std::collections::BTreeMap;

use super::config::ExperimentConfig;
use super::gen::{gen_perturbed_pair, sub_seed};
use super::presets::{preset, PresetParams};
use super::report::{Check, CurvePoint, Report, Row};
use super::{config_value, difference, ratio};
use crate::besov::{sup_norm_estimate, SupOptions};
use crate::calculus::{perturbation_representation, BandlimitedFunction};
use crate::error::Result;

pub fn run_lipschitz_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let name = cfg
        .function
        .clone()
        .unwrap_or_else(|| if cfg.n == 1 { "sin-xj".into() } else { "random".into() });
    let base = preset(
        &name,
        &PresetParams {
            n: cfg.n,
            k: cfg.terms,
            sigma: 1.0,
            seed: sub_seed(cfg.seed, &[0]),
            ..Default::default()
        },
    )?;
    run_lipschitz_with(cfg, &base)
}

/// Runs the experiment for `f_s(x) = base(s x)`, `s` over `cfg.sigmas`.
///
/// The perturbation size is `epsilon / s`, so that `s * delta` stays on one
/// scale; the bound is tested through `|f_s(A) - f_s(B)| / (sigma_s |f|_inf delta)`.
/// The control drops the bandwidth factor and must drift with `s`.
pub fn run_lipschitz_with(cfg: &ExperimentConfig, base: &BandlimitedFunction) -> Result<Report> {
    let mut report = Report::new("lipschitz", cfg.seed, config_value(cfg));
    let sup = sup_norm_estimate(base, &SupOptions::default());
    let mut trial = 0;
    let mut worst_residual = 0.0_f64;
    for (si, &s) in cfg.sigmas.iter().enumerate() {
        let f = base.dilate(s);
        let eps = cfg.epsilon / s;
        for &dim in &cfg.dims {
            for t in 0..cfg.trials {
                let mode = cfg.modes[t % cfg.modes.len()];
                let seed = sub_seed(cfg.seed, &[1, si as u64, dim as u64, t as u64]);
                let pair = gen_perturbed_pair(dim, cfg.n, cfg.half_width, eps, mode, seed)?;
                let lhs = difference(&f, &pair)?.op_norm();
                let rhs = f.sigma() * sup * pair.delta;
                if t == 0 {
                    let rep = perturbation_representation(&f, &pair.a, &pair.b)?;
                    worst_residual = worst_residual.max(rep.residual / rep.tolerance());
                }
                report.rows.push(Row {
                    trial,
                    group: format!("sigma={s}"),
                    inputs: BTreeMap::from([
                        ("sigma".to_string(), s),
                        ("dim".to_string(), dim as f64),
                        ("eps".to_string(), eps),
                        ("delta".to_string(), pair.delta),
                        ("sup_norm".to_string(), sup),
                    ]),
                    lhs,
                    rhs,
                    ratio: ratio(lhs, rhs),
                    control: Some(ratio(lhs, sup * pair.delta)),
                });
                trial += 1;
            }
        }
    }
    let mut report = report.finalize();
    let maxima: Vec<f64> = report.aggregates.iter().map(|a| a.max_ratio).collect();
    let controls: Vec<f64> = report.aggregates.iter().map(|a| a.max_control.unwrap_or(0.0)).collect();
    for (a, &s) in report.aggregates.clone().iter().zip(&cfg.sigmas) {
        report.curve.push(CurvePoint { series: "max-ratio".into(), x: s, y: a.max_ratio });
    }
    for (&c, &s) in controls.iter().zip(&cfg.sigmas) {
        report.curve.push(CurvePoint { series: "control".into(), x: s, y: c });
    }
    let mut sorted = maxima.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let spread = maxima
        .iter()
        .map(|&m| if m == 0.0 && median == 0.0 { 1.0 } else { (m / median).max(median / m) })
        .fold(1.0, f64::max);
    report.checks.push(Check::at_most(
        "sigma stability",
        spread,
        2.0,
        "worst factor between a per-sigma maximum ratio and their median",
    ));
    let hi = controls.iter().copied().fold(0.0, f64::max);
    let lo = controls.iter().copied().fold(f64::INFINITY, f64::min);
    report.checks.push(Check::at_least(
        "control spread",
        ratio(hi, lo),
        2.0,
        "max over min of the per-sigma control maxima (bandwidth factor dropped)",
    ));
    report.checks.push(Check::at_most(
        "representation residual",
        worst_residual,
        1.0,
        "worst residual of the Psi representation over its tolerance",
    ));
    Ok(report.finalize())
}
