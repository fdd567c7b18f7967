//! Hoelder and modulus-of-continuity bounds on cone-type functions.

use std::collections::BTreeMap;

use super::config::{ExperimentConfig, ModulusSpec};
use super::gen::{gen_pair, sub_seed, PairSpec, PerturbedPair, SpectrumBox};
use super::presets::cone;
use super::report::{Check, Report, Row};
use super::{config_value, difference, ratio, scaling_checks};
use crate::besov::{modulus_star, ModulusOfContinuity};
use crate::calculus::{FnHandle, RnFunction};
use crate::error::Result;

/// Pair whose first `dim / 2` spectrum points sit within `delta` of the
/// origin, perturbed by `delta`. `family` separates seed streams.
pub(crate) fn tip_pair(cfg: &ExperimentConfig, family: u64, dim: usize, level: usize, delta: f64, t: usize) -> Result<PerturbedPair> {
    let origin = vec![0.0; cfg.n];
    gen_pair(
        &PairSpec {
            dim,
            spectrum: SpectrumBox::cube(cfg.n, cfg.half_width),
            cluster: Some((SpectrumBox::around(&origin, delta), dim / 2)),
            eps: delta,
            mode: cfg.modes[t % cfg.modes.len()],
        },
        sub_seed(cfg.seed, &[2, family, dim as u64, level as u64, t as u64]),
    )
}

/// Runs `f` over all dims, delta levels and trials; `rhs(delta)` is the
/// predicted scale and the control is `lhs / delta`.
fn sweep(
    cfg: &ExperimentConfig,
    report: &mut Report,
    group: &str,
    family: u64,
    f: &dyn RnFunction,
    rhs: &dyn Fn(f64) -> Result<f64>,
) -> Result<()> {
    let mut trial = report.rows.len();
    for &dim in &cfg.dims {
        for (level, &target) in cfg.deltas.values().iter().enumerate() {
            for t in 0..cfg.trials {
                let pair = tip_pair(cfg, family, dim, level, target, t)?;
                let lhs = difference(f, &pair)?.op_norm();
                let r = if pair.delta > 0.0 { rhs(pair.delta)? } else { 0.0 };
                report.rows.push(Row {
                    trial,
                    group: group.to_string(),
                    inputs: BTreeMap::from([
                        ("dim".to_string(), dim as f64),
                        ("level".to_string(), level as f64),
                        ("delta_target".to_string(), target),
                        ("delta".to_string(), pair.delta),
                    ]),
                    lhs,
                    rhs: r,
                    ratio: ratio(lhs, r),
                    control: Some(ratio(lhs, pair.delta)),
                });
                trial += 1;
            }
        }
    }
    Ok(())
}

/// Ratios `|f(A) - f(B)| / delta^alpha` for the cone `|x|^alpha`, with half
/// of the spectrum near the tip at the scale of the perturbation.
pub fn run_hoelder_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::new("hoelder", cfg.seed, config_value(cfg));
    for &alpha in &cfg.alphas {
        let group = format!("alpha={alpha}");
        let f = cone(vec![0.0; cfg.n], alpha, cfg.smoothing);
        sweep(cfg, &mut report, &group, alpha.to_bits(), &f, &|d: f64| Ok(d.powf(alpha)))?;
        scaling_checks(&mut report, &group, "lhs / delta", false);
    }
    Ok(report.finalize())
}

/// `omega(|x|)` on `R^n`.
fn radial(w: &ModulusOfContinuity, n: usize, smoothing: f64) -> FnHandle {
    let w = w.clone();
    let base = w.eval(smoothing);
    FnHandle::new(format!("omega(|x|) for {w:?}"), n, move |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() + smoothing * smoothing;
        w.eval(r2.sqrt()) - base
    })
}

/// Ratios `|f(A) - f(B)| / omega_*(delta)` for `f = omega(|x|)`. Power moduli
/// reuse the Hoelder seeds, so their rows agree with `run_hoelder_experiment`
/// up to the factor `1 - alpha`.
pub fn run_omega_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::new("omega", cfg.seed, config_value(cfg));
    for (mi, spec) in cfg.moduli.iter().enumerate() {
        let w = spec.build()?;
        let group = spec.label();
        let family = match spec {
            ModulusSpec::Power { alpha } => alpha.to_bits(),
            _ => 0x0de6a_u64 + mi as u64,
        };
        let f = radial(&w, cfg.n, cfg.smoothing);
        let start = report.rows.len();
        sweep(cfg, &mut report, &group, family, &f, &|d: f64| modulus_star(&w, d))?;
        let power = matches!(spec, ModulusSpec::Power { .. });
        // The log-Lipschitz control grows only like ln(1/delta).
        scaling_checks(&mut report, &group, "lhs / delta", !power);
        if let ModulusSpec::Power { alpha } = *spec {
            let mut identity = 0.0_f64;
            for d in cfg.deltas.values() {
                let exact = d.powf(alpha) / (1.0 - alpha);
                identity = identity.max((modulus_star(&w, d)? / exact - 1.0).abs());
            }
            report.checks.push(Check::at_most(
                format!("{group}: omega_* identity"),
                identity,
                1e-9,
                "relative deviation of omega_*(delta) from delta^alpha / (1 - alpha)",
            ));
            let mut consistency = 0.0_f64;
            for r in &mut report.rows[start..] {
                let hoelder = ratio(r.lhs, r.inputs["delta"].powf(alpha));
                r.inputs.insert("hoelder_ratio".into(), hoelder);
                if hoelder > 0.0 {
                    consistency = consistency.max((r.ratio / ((1.0 - alpha) * hoelder) - 1.0).abs());
                }
            }
            report.checks.push(Check::at_most(
                format!("{group}: consistency with the Hoelder ratio"),
                consistency,
                1e-9,
                "relative deviation of ratio from (1 - alpha) lhs / delta^alpha",
            ));
        }
    }
    Ok(report.finalize())
}
