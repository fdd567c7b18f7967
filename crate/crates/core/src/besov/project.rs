use crate::calculus::{BandlimitedFunction, Term};
use crate::error::{Error, Result};
use crate::fft::{fftn, signed_index, unravel};
use crate::C64;

/// A uniform periodic grid: `shape[i]` nodes spaced `period[i] / shape[i]`
/// from `origin[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformGrid {
    pub origin: Vec<f64>,
    pub period: Vec<f64>,
    pub shape: Vec<usize>,
}

impl UniformGrid {
    pub fn n(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node at row-major position `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let idx = unravel(flat, &self.shape);
        (0..self.n())
            .map(|i| self.origin[i] + idx[i] as f64 * self.period[i] / self.shape[i] as f64)
            .collect()
    }

    /// Smallest Nyquist frequency `pi N_i / P_i` over the axes.
    pub fn nyquist(&self) -> f64 {
        (0..self.n())
            .map(|i| std::f64::consts::PI * self.shape[i] as f64 / self.period[i])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> C64) -> Vec<C64> {
        (0..self.len()).map(|k| f(&self.point(k))).collect()
    }
}

/// Trigonometric interpolation of `samples` keeping the modes with
/// `|xi| <= sigma`. Nyquist modes are split evenly between `+-xi`.
pub fn bandlimit_project(samples: &[C64], grid: &UniformGrid, sigma: f64) -> Result<BandlimitedFunction> {
    let n = grid.n();
    if n == 0 || grid.origin.len() != n || grid.period.len() != n {
        return Err(Error::DimensionMismatch("inconsistent grid description".into()));
    }
    if samples.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} samples for a grid of {} nodes",
            samples.len(),
            grid.len()
        )));
    }
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be nonnegative, got {sigma}")));
    }
    let nyq = grid.nyquist();
    if sigma > nyq {
        return Err(Error::GridTooCoarse(format!(
            "bandwidth {sigma} exceeds the grid Nyquist frequency {nyq}"
        )));
    }
    let mut data = samples.to_vec();
    fftn(&mut data, &grid.shape, false);
    let total = grid.len() as f64;
    let biggest = data.iter().map(|v| v.norm()).fold(0.0, f64::max) / total;
    let mut terms = Vec::new();
    for (flat, v) in data.iter().enumerate() {
        let c = v / total;
        if c.norm() <= 1e-15 * biggest {
            continue;
        }
        let idx = unravel(flat, &grid.shape);
        // Each Nyquist axis doubles the number of images.
        let mut images: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
        for i in 0..n {
            let len = grid.shape[i];
            let k = signed_index(idx[i], len);
            let unit = 2.0 * std::f64::consts::PI / grid.period[i];
            let split = len % 2 == 0 && idx[i] == len / 2;
            let options: Vec<(f64, f64)> = if split {
                vec![(k as f64 * unit, 0.5), (-(k as f64) * unit, 0.5)]
            } else {
                vec![(k as f64 * unit, 1.0)]
            };
            images = images
                .into_iter()
                .flat_map(|(xi, w)| {
                    options.iter().map(move |(v, s)| {
                        let mut xi = xi.clone();
                        xi.push(*v);
                        (xi, w * s)
                    })
                })
                .collect();
        }
        for (xi, w) in images {
            let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > sigma * (1.0 + 1e-12) {
                continue;
            }
            let shift: f64 = xi.iter().zip(&grid.origin).map(|(a, b)| a * b).sum();
            terms.push(Term {
                xi,
                c: c * w * C64::from_polar(1.0, -shift),
            });
        }
    }
    BandlimitedFunction::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid1(n: usize) -> UniformGrid {
        UniformGrid {
            origin: vec![-PI],
            period: vec![2.0 * PI],
            shape: vec![n],
        }
    }

    #[test]
    fn recovers_character() {
        let g = grid1(16);
        let s = g.sample(|x| C64::from_polar(1.0, x[0]));
        let f = bandlimit_project(&s, &g, 1.5).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert!((f.terms()[0].c - 1.0).norm() < 1e-10);
        assert!((f.terms()[0].xi[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_band_drops_modes() {
        let g = grid1(16);
        let s = g.sample(|x| C64::new((3.0 * x[0]).sin(), 0.0));
        let f = bandlimit_project(&s, &g, 2.0).unwrap();
        assert!(f.terms().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let noise: Vec<C64> = (0..16).map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
        let mean: C64 = noise.iter().sum::<C64>() / 16.0;
        let f = bandlimit_project(&noise, &g, 0.0).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert!((f.terms()[0].c - mean).norm() < 1e-15);
    }

    #[test]
    fn idempotent_and_nyquist() {
        let g = UniformGrid {
            origin: vec![0.3, -1.0],
            period: vec![4.0, 6.0],
            shape: vec![8, 12],
        };
        let s = g.sample(|x| C64::new((x[0] * PI / 2.0).cos() + (x[1] * 2.0 * PI / 3.0).sin(), 0.0));
        let f = bandlimit_project(&s, &g, 3.0).unwrap();
        let again = bandlimit_project(&g.sample(|x| f.eval_c(x)), &g, 3.0).unwrap();
        for k in 0..g.len() {
            let p = g.point(k);
            assert!((f.eval_c(&p) - again.eval_c(&p)).norm() < 1e-12);
            assert!((f.eval_c(&p) - s[k]).norm() < 1e-12);
        }
        assert!(bandlimit_project(&s, &g, 100.0).is_err());
    }
}
