//! Schatten-class versions of the perturbation bounds.
//!
//! * `s1`: band-limited `f`, `|f(A) - f(B)|_S1` against `sigma |f|_inf max |A_j - B_j|_S1`.
//! * `sp`: the cone, `|f(A) - f(B)|_{S_{p/alpha}}` against `|f|_{Lambda_alpha} max |A_j - B_j|_{S_p}^alpha`.
//!   At `p = 1` this bound is known to fail, so that group is exploratory.
//! * `besov`: lacunary `f`, `|f(A) - f(B)|_{S_{1/alpha}}` against
//!   `|f|_{B^alpha_{inf,1}} max |A_j - B_j|_S1^alpha`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::gen::{gen_perturbed_pair, sub_seed, tuple_distance, PerturbedPair};
use super::hoelder::tip_pair;
use super::presets::{cone, preset, PresetParams};
use super::report::{Check, Report, Row};
use super::{config_value, difference, ratio, scaling_checks};
use crate::besov::{besov_norm, holder_seminorm, sup_norm_estimate, SupOptions};
use crate::calculus::{perturbation_representation, BandlimitedFunction, RnFunction};
use crate::dyadic::Window;
use crate::error::Result;
use crate::spectral::schatten_norm;

const HOLDER_PAIRS: usize = 4000;

/// One group of the sweep: `measure(pair)` returns `(lhs, delta, rhs, control)`.
fn sweep(
    cfg: &ExperimentConfig,
    report: &mut Report,
    group: &str,
    pair_for: &dyn Fn(usize, usize, f64, usize) -> Result<PerturbedPair>,
    measure: &dyn Fn(&PerturbedPair) -> Result<(f64, f64, f64, f64)>,
) -> Result<()> {
    let mut trial = report.rows.len();
    for &dim in &cfg.dims {
        for (level, &target) in cfg.deltas.values().iter().enumerate() {
            for t in 0..cfg.trials {
                let pair = pair_for(dim, level, target, t)?;
                let (lhs, delta, rhs, control) = measure(&pair)?;
                report.rows.push(Row {
                    trial,
                    group: group.to_string(),
                    inputs: BTreeMap::from([
                        ("dim".to_string(), dim as f64),
                        ("level".to_string(), level as f64),
                        ("delta_target".to_string(), target),
                        ("delta".to_string(), delta),
                    ]),
                    lhs,
                    rhs,
                    ratio: ratio(lhs, rhs),
                    control: Some(control),
                });
                trial += 1;
            }
        }
    }
    Ok(())
}

fn uniform_pair(cfg: &ExperimentConfig, family: u64) -> impl Fn(usize, usize, f64, usize) -> Result<PerturbedPair> + '_ {
    move |dim, level, target, t| {
        gen_perturbed_pair(
            dim,
            cfg.n,
            cfg.half_width,
            target,
            cfg.modes[t % cfg.modes.len()],
            sub_seed(cfg.seed, &[3, family, dim as u64, level as u64, t as u64]),
        )
    }
}

fn s1_group(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let sigma = cfg.sigmas[0];
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, &[3, 0]));
    let f = BandlimitedFunction::random(cfg.n, cfg.terms, sigma, &mut rng);
    let sup = sup_norm_estimate(&f, &SupOptions::default());
    let pairs = uniform_pair(cfg, 0);
    let worst = std::cell::Cell::new(0.0_f64);
    let measure = |pair: &PerturbedPair| -> Result<(f64, f64, f64, f64)> {
        let diff = difference(&f, pair)?;
        let lhs = schatten_norm(&diff, 1.0)?;
        let d = tuple_distance(&pair.a, &pair.b, 1.0)?;
        if pair.a.dim() == cfg.dims[0] && worst.get() == 0.0 {
            let rep = perturbation_representation(&f, &pair.a, &pair.b)?;
            worst.set((rep.residual / rep.tolerance()).max(f64::MIN_POSITIVE));
        }
        Ok((lhs, d, f.sigma() * sup * d, ratio(lhs, d * d)))
    };
    sweep(cfg, report, "s1", &pairs, &measure)?;
    scaling_checks(report, "s1", "lhs / delta_S1^2", false);
    report.checks.push(Check::at_most(
        "s1: representation residual",
        worst.get(),
        1.0,
        "residual of the Psi representation over its tolerance on the first pair",
    ));
    Ok(())
}

fn sp_groups(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let region = Window::cube(cfg.n, -cfg.half_width, cfg.half_width);
    for &alpha in &cfg.alphas {
        let f = cone(vec![0.0; cfg.n], alpha, cfg.smoothing);
        let norm = holder_seminorm(&f, alpha, &region, HOLDER_PAIRS, sub_seed(cfg.seed, &[3, 1]))?;
        let mut ps = cfg.p.clone();
        if !ps.contains(&1.0) {
            ps.push(1.0);
        }
        for &p in &ps {
            let group = format!("sp: alpha={alpha}, p={p}");
            let pairs = |dim, level, target, t| tip_pair(cfg, alpha.to_bits() ^ p.to_bits(), dim, level, target, t);
            let measure = |pair: &PerturbedPair| -> Result<(f64, f64, f64, f64)> {
                let lhs = schatten_norm(&difference(&f, pair)?, p / alpha)?;
                let d = tuple_distance(&pair.a, &pair.b, p)?;
                Ok((lhs, d, norm * d.powf(alpha), ratio(lhs, d)))
            };
            sweep(cfg, report, &group, &pairs, &measure)?;
            scaling_checks(report, &group, "lhs / delta_Sp", p <= 1.0);
        }
    }
    Ok(())
}

fn besov_groups(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    // Enough octaves for the function to look Hoelder down to the smallest delta.
    let octaves = ((1.0 / cfg.deltas.min).log2().ceil() as usize + 3).max(cfg.terms);
    for &alpha in &cfg.alphas {
        let f = preset(
            "lacunary",
            &PresetParams {
                n: cfg.n,
                k: octaves,
                alpha,
                ..Default::default()
            },
        )?;
        let norm = besov_norm(&f, alpha, &SupOptions::default());
        let group = format!("besov: alpha={alpha}");
        let pairs = uniform_pair(cfg, 2 ^ alpha.to_bits());
        let measure = |pair: &PerturbedPair| -> Result<(f64, f64, f64, f64)> {
            let lhs = schatten_norm(&difference(&f as &dyn RnFunction, pair)?, 1.0 / alpha)?;
            let d = tuple_distance(&pair.a, &pair.b, 1.0)?;
            Ok((lhs, d, norm * d.powf(alpha), ratio(lhs, d)))
        };
        sweep(cfg, report, &group, &pairs, &measure)?;
        scaling_checks(report, &group, "lhs / delta_S1", false);
    }
    Ok(())
}

pub fn run_schatten_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::new("schatten", cfg.seed, config_value(cfg));
    s1_group(cfg, &mut report)?;
    sp_groups(cfg, &mut report)?;
    besov_groups(cfg, &mut report)?;
    Ok(report.finalize())
}
