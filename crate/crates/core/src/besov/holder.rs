use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::calculus::RnFunction;
use crate::dyadic::Window;
use crate::error::{Error, Result};

fn ratio(f: &dyn RnFunction, alpha: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok((f.eval(x)? - f.eval(y)?).norm() / d.powf(alpha))
}

/// Lower estimate of `sup |f(x) - f(y)| / |x - y|^alpha`.
///
/// `x` is uniform in `region`; `y = x + r u` with `u` a random direction and
/// `r` log-uniform between `1e-6` and the region diameter. The best pair is
/// then improved by a pattern search on both endpoints.
pub fn holder_seminorm(
    f: &dyn RnFunction,
    alpha: f64,
    region: &Window,
    sample_pairs: usize,
    seed: u64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if region.n() != f.n() {
        return Err(Error::DimensionMismatch(format!(
            "region in R^{} for a function on R^{}",
            region.n(),
            f.n()
        )));
    }
    let n = f.n();
    let diam = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| (b - a).powi(2))
        .sum::<f64>()
        .sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r_lo, r_hi) = ((1e-6 * diam).ln(), diam.ln());
    let mut best = (0.0, vec![0.0; n], vec![0.0; n]);
    for _ in 0..sample_pairs {
        let x = region.sample(&mut rng);
        let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        let r = rng.random_range(r_lo..r_hi).exp();
        let y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + r * d / len).collect();
        let v = ratio(f, alpha, &x, &y)?;
        if v > best.0 {
            best = (v, x, y);
        }
    }
    let (mut val, mut x, mut y) = best;
    let mut step = 0.1 * (x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()).max(1e-12);
    for _ in 0..400 {
        let mut improved = false;
        for which in 0..2 {
            for i in 0..n {
                for dir in [-1.0, 1.0] {
                    let (mut cx, mut cy) = (x.clone(), y.clone());
                    if which == 0 {
                        cx[i] += dir * step;
                    } else {
                        cy[i] += dir * step;
                    }
                    let v = ratio(f, alpha, &cx, &cy)?;
                    if v > val {
                        val = v;
                        x = cx;
                        y = cy;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
    }
    Ok(val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FnHandle;

    #[test]
    fn cone_and_constant() {
        let a = 0.3;
        let cone = FnHandle::new("cone", 1, move |x| (x[0] - a).abs().powf(0.5));
        let w = Window::cube(1, -2.0, 2.0);
        let v = holder_seminorm(&cone, 0.5, &w, 500, 1).unwrap();
        assert!((0.9..=1.0 + 1e-12).contains(&v), "{v}");
        let c = FnHandle::new("c", 2, |_| 3.0);
        assert_eq!(holder_seminorm(&c, 0.5, &Window::cube(2, 0.0, 1.0), 100, 1).unwrap(), 0.0);
    }

    #[test]
    fn sine_is_stable_across_seeds() {
        let f = FnHandle::new("sin", 1, |x| x[0].sin());
        let w = Window::cube(1, -10.0, 10.0);
        let vals: Vec<f64> = (0..4).map(|s| holder_seminorm(&f, 0.5, &w, 2000, s).unwrap()).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(0.0, f64::max);
        assert!(hi <= 1.05 * lo, "{vals:?}");
    }
}
