//! Multiplier norms of the divided differences of `g(x1 - x3) sin x2`,
//! `g` the sine integral, on growing grids.
//!
//! On the grids below `x2 = y2`, so the second divided difference reduces to
//! `g(y1 - x3) cos x2`: a Toeplitz-type matrix in `(t_l - s_k)`. The first
//! and third differences serve as controls.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::gen::sub_seed;
use super::presets::KontrFunction;
use super::report::{Check, CurvePoint, Report, Row};
use super::{config_value, ratio};
use crate::calculus::GridFunction;
use crate::error::Result;
use crate::multiplier::{multiplier_norm_on_grid, MultiplierCertificate};

/// Point sets `(X, Y)` of size `size` in `[-R, R]^3`, `R = size / 2`.
///
/// `X_k = (u_k, pi/4, s_k)` and `Y_l = (t_l, pi/4, v_l)` with `s` equispaced,
/// `t` shifted from `s` by half a step, and `u, v` seeded uniform.
pub fn kontr_grids(size: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let r = size as f64 / 2.0;
    let step = if size > 1 { 2.0 * r / (size - 1) as f64 } else { 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::with_capacity(size);
    let mut ys = Vec::with_capacity(size);
    for k in 0..size {
        let s = -r + step * k as f64;
        xs.push(vec![rng.random_range(-r..=r), FRAC_PI_4, s]);
        ys.push(vec![s + 0.5 * step, FRAC_PI_4, rng.random_range(-r..=r)]);
    }
    (xs, ys)
}

pub fn run_kontr_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::new("kontr", cfg.seed, config_value(cfg));
    let f = KontrFunction;
    let mut sizes = cfg.grid.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    // certs[j][i]: coordinate j, size i
    let mut certs: Vec<Vec<MultiplierCertificate>> = vec![Vec::new(); 3];
    let mut trial = 0;
    for &size in &sizes {
        let (xs, ys) = kontr_grids(size, sub_seed(cfg.seed, &[4, size as u64]));
        for j in 0..3 {
            let phi = GridFunction::divided_difference(&f, j);
            let c = multiplier_norm_on_grid(&phi, &xs, &ys, cfg.grid.tol)?;
            let group = format!("delta{}", j + 1);
            report.rows.push(Row {
                trial,
                group: group.clone(),
                inputs: BTreeMap::from([
                    ("N".to_string(), size as f64),
                    ("R".to_string(), size as f64 / 2.0),
                    ("lower".to_string(), c.lower),
                    ("upper".to_string(), c.upper),
                    ("gap".to_string(), c.gap),
                    ("converged".to_string(), if c.converged { 1.0 } else { 0.0 }),
                ]),
                lhs: c.value,
                rhs: 1.0,
                ratio: c.value,
                control: None,
            });
            report.curve.push(CurvePoint { series: group, x: size as f64, y: c.value });
            certs[j].push(c);
            trial += 1;
        }
    }
    let d2 = &certs[1];
    let steps = d2.windows(2).map(|w| ratio(w[1].lower, w[0].lower)).fold(f64::INFINITY, f64::min);
    report.checks.push(Check::at_least(
        "delta2: nondecreasing",
        if d2.len() < 2 { 1.0 } else { steps },
        1.0,
        "smallest ratio of consecutive gamma_2 lower bounds",
    ));
    let growth_lo = |c: &[MultiplierCertificate]| ratio(c[c.len() - 1].lower, c[0].upper);
    let growth_hi = |c: &[MultiplierCertificate]| ratio(c[c.len() - 1].upper, c[0].lower);
    let control = growth_hi(&certs[0]).max(growth_hi(&certs[2]));
    report.checks.push(Check::at_least(
        "delta2: dominance over controls",
        ratio(growth_lo(d2), control),
        cfg.grid.threshold,
        "certified delta2 growth (last lower / first upper) over the largest certified control \
         growth (last upper / first lower)",
    ));
    let gap = certs.iter().flatten().map(|c| c.gap).fold(0.0, f64::max);
    report.checks.push(
        Check::at_most("solver gap", gap, cfg.grid.tol, "largest gap between the gamma_2 bounds")
            .exploratory(),
    );
    Ok(report.finalize())
}
