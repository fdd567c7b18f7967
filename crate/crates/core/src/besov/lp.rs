use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::BandlimitedFunction;
use crate::smooth::smoothstep;

/// Low-pass profile: 1 on `[0, 1]`, 0 on `[2, inf)`.
pub fn low_pass(t: f64) -> f64 {
    1.0 - smoothstep(t - 1.0)
}

/// Weight of piece `m` at frequency norm `t`: `low_pass(t)` for `m = 0`,
/// `low_pass(t / 2^m) - low_pass(t / 2^(m-1))` for `m >= 1`, supported in
/// `[2^(m-1), 2^(m+1)]`. The weights telescope to 1.
pub fn lp_weight(m: u32, t: f64) -> f64 {
    if m == 0 {
        low_pass(t)
    } else {
        low_pass(t / 2f64.powi(m as i32)) - low_pass(t / 2f64.powi(m as i32 - 1))
    }
}

#[derive(Clone, Debug)]
pub struct LittlewoodPaleyPieces {
    pub base: BandlimitedFunction,
    /// `(m, f_m)` for `m = 0..=M`, with `2^M >= sigma`.
    pub pieces: Vec<(u32, BandlimitedFunction)>,
}

impl LittlewoodPaleyPieces {
    /// `sum_m f_m(x)`.
    pub fn resum(&self, x: &[f64]) -> crate::C64 {
        self.pieces.iter().map(|(_, p)| p.eval_c(x)).sum()
    }
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn lp_decompose(f: &BandlimitedFunction) -> LittlewoodPaleyPieces {
    let mut top = 0u32;
    while 2f64.powi(top as i32) < f.sigma() {
        top += 1;
    }
    let pieces = (0..=top)
        .map(|m| (m, f.reweight(|xi| lp_weight(m, norm(xi)))))
        .collect();
    LittlewoodPaleyPieces {
        base: f.clone(),
        pieces,
    }
}

/// Mesh options for sup-norm estimates.
#[derive(Clone, Debug)]
pub struct SupOptions {
    pub seed: u64,
    pub samples: usize,
    /// Points are drawn from `[-half_width, half_width]^n`.
    pub half_width: f64,
    pub refine_steps: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            seed: 0x5eed,
            samples: 2000,
            half_width: 64.0,
            refine_steps: 60,
        }
    }
}

/// Estimate of `sup |f|` from a seeded mesh with a local pattern-search
/// refinement around the best points. Never exceeds `sum |c_k|`.
pub fn sup_norm_estimate(f: &BandlimitedFunction, opts: &SupOptions) -> f64 {
    if f.terms().is_empty() {
        return 0.0;
    }
    let n = f.n();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cands: Vec<(f64, Vec<f64>)> = Vec::with_capacity(opts.samples + 1);
    let origin = vec![0.0; n];
    cands.push((f.eval_c(&origin).norm(), origin));
    for _ in 0..opts.samples {
        let x: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-opts.half_width..opts.half_width))
            .collect();
        cands.push((f.eval_c(&x).norm(), x));
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let step0 = std::f64::consts::PI / f.sigma().max(1e-3);
    let mut best = cands[0].0;
    for (mut val, mut x) in cands.into_iter().take(5) {
        let mut step = 0.25 * step0;
        for _ in 0..opts.refine_steps {
            let mut improved = false;
            for i in 0..n {
                for dir in [-1.0, 1.0] {
                    let mut y = x.clone();
                    y[i] += dir * step;
                    let v = f.eval_c(&y).norm();
                    if v > val {
                        val = v;
                        x = y;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(val);
    }
    best.min(f.coefficient_l1())
}

/// `sum_m 2^(m s) sup |f_m|` with the window of [`lp_weight`].
pub fn besov_norm(f: &BandlimitedFunction, s: f64, opts: &SupOptions) -> f64 {
    lp_decompose(f)
        .pieces
        .iter()
        .map(|(m, p)| 2f64.powf(*m as f64 * s) * sup_norm_estimate(p, opts))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Term;
    use crate::C64;

    fn sine(freq: f64) -> BandlimitedFunction {
        let mut terms = Vec::new();
        BandlimitedFunction::push_real_pair(&mut terms, vec![freq], C64::new(0.0, -0.5));
        BandlimitedFunction::new(1, terms).unwrap()
    }

    #[test]
    fn weights_partition_unity() {
        for k in 0..400 {
            let t = k as f64 * 0.05;
            let total: f64 = (0..8).map(|m| lp_weight(m, t)).sum();
            assert!((total - 1.0).abs() < 1e-15);
            for m in 1..8 {
                let w = lp_weight(m, t);
                let l = 2f64.powi(m as i32);
                if t < l / 2.0 || t > 2.0 * l {
                    assert_eq!(w, 0.0);
                }
                assert!(w >= 0.0);
            }
        }
    }

    #[test]
    fn sine_norms() {
        let opts = SupOptions::default();
        assert!((besov_norm(&sine(1.0), 1.0, &opts) - 1.0).abs() < 1e-6);
        assert!((besov_norm(&sine(2.0), 1.0, &opts) - 2.0).abs() < 1e-6);
        assert_eq!(besov_norm(&BandlimitedFunction::zero(2), 1.0, &opts), 0.0);
    }

    #[test]
    fn dyadic_frequency_splits_in_two() {
        let f = BandlimitedFunction::new(
            1,
            vec![Term {
                xi: vec![3.0],
                c: C64::new(1.0, 0.0),
            }],
        )
        .unwrap();
        let lp = lp_decompose(&f);
        let live: Vec<u32> = lp
            .pieces
            .iter()
            .filter(|(_, p)| !p.terms().is_empty())
            .map(|(m, _)| *m)
            .collect();
        assert_eq!(live, vec![1, 2]);
        assert!((lp.resum(&[0.7]) - f.eval_c(&[0.7])).norm() < 1e-15);
    }
}
