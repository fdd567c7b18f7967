//! Multiplier bounds for smooth functions on a cube `Q x R` of `R^{2n}`.

use serde::Serialize;

use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use crate::fft::{fftn, signed_index, unravel};
use crate::smooth::plateau;
use crate::C64;

/// `Q x R` with `Q = prod [x_lo_i, x_lo_i + side)` and `R` likewise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductCube {
    pub x_lo: Vec<f64>,
    pub y_lo: Vec<f64>,
    pub side: f64,
}

impl ProductCube {
    pub fn new(x_lo: Vec<f64>, y_lo: Vec<f64>, side: f64) -> Result<Self> {
        if x_lo.len() != y_lo.len() || x_lo.is_empty() {
            return Err(Error::DimensionMismatch("corner lengths differ".into()));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidArgument(format!("side must be positive, got {side}")));
        }
        Ok(ProductCube { x_lo, y_lo, side })
    }

    /// The dyadic cube in a lattice with unit cell `unit`.
    pub fn from_dyadic(c: &DyadicCube, unit: f64) -> Self {
        let side = c.sidelength() * unit;
        ProductCube {
            x_lo: c.q.iter().map(|&v| v as f64 * side).collect(),
            y_lo: c.r.iter().map(|&v| v as f64 * side).collect(),
            side,
        }
    }

    pub fn n(&self) -> usize {
        self.x_lo.len()
    }

    /// Dilate by `factor` about the center.
    pub fn dilate(&self, factor: f64) -> Self {
        let shift = 0.5 * (factor - 1.0) * self.side;
        ProductCube {
            x_lo: self.x_lo.iter().map(|v| v - shift).collect(),
            y_lo: self.y_lo.iter().map(|v| v - shift).collect(),
            side: self.side * factor,
        }
    }

    fn lower(&self) -> Vec<f64> {
        self.x_lo.iter().chain(&self.y_lo).copied().collect()
    }
}

type Psi<'a> = &'a dyn Fn(&[f64], &[f64]) -> Result<C64>;

#[derive(Clone, Debug, Default)]
pub struct FouOptions {
    /// Grid nodes per axis of `R^{2n}`; defaults to about `4096^(1/2n)`.
    pub grid_per_axis: Option<usize>,
    /// Highest derivative order; defaults to `min(2n + 2, 4)`.
    pub max_order: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FouBound {
    /// `max_{|alpha| <= k} L^|alpha| max |D^alpha Psi|` over the grid.
    pub bound: f64,
    /// The absolute constant in front of the bound; not quantified.
    pub constant: f64,
    /// Contribution of each derivative order.
    pub per_order: Vec<f64>,
    /// Orders actually used.
    pub max_order: usize,
    pub skipped_points: usize,
    pub warnings: Vec<String>,
}

impl FouBound {
    pub fn quality_ok(&self) -> bool {
        self.warnings.is_empty()
    }
}

fn binomial(k: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |acc, t| acc * (k - t) as f64 / (t + 1) as f64)
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in 0..=order {
        for mut rest in multi_indices(dim - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Nested central difference `D^alpha` at `a` with step `h`.
fn derivative(psi: Psi, a: &[f64], alpha: &[usize], h: f64, n: usize) -> Result<C64> {
    let axes: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] > 0).collect();
    let mut counters = vec![0usize; axes.len()];
    let mut acc = C64::new(0.0, 0.0);
    let mut point = a.to_vec();
    loop {
        let mut weight = 1.0;
        for (slot, &axis) in axes.iter().enumerate() {
            let k = alpha[axis];
            let t = counters[slot];
            point[axis] = a[axis] + (k as f64 / 2.0 - t as f64) * h;
            weight *= binomial(k, t) * if t % 2 == 0 { 1.0 } else { -1.0 };
        }
        acc += psi(&point[..n], &point[n..])? * weight;
        let mut slot = 0;
        loop {
            if slot == axes.len() {
                let order: usize = alpha.iter().sum();
                return Ok(acc / h.powi(order as i32));
            }
            counters[slot] += 1;
            if counters[slot] <= alpha[axes[slot]] {
                break;
            }
            counters[slot] = 0;
            slot += 1;
        }
    }
}

/// Derivative-based multiplier bound on the cube of sidelength `L`:
/// `max_{|alpha| <= k} L^|alpha| max_{a in (3/2) C} |D^alpha Psi(a)|`,
/// sampled on a grid of the closed dilate. Derivatives are nested central
/// differences; a step-halving disagreement above 10% adds a warning.
/// Points where `psi` fails are skipped and counted.
pub fn lemma_fou_bound(psi: Psi, cube: &ProductCube, opts: &FouOptions) -> Result<FouBound> {
    let n = cube.n();
    let dim = 2 * n;
    let grid = opts
        .grid_per_axis
        .unwrap_or_else(|| (4096f64.powf(1.0 / dim as f64).floor() as usize).max(3));
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least two nodes per axis".into()));
    }
    let max_order = opts.max_order.unwrap_or((2 * n + 2).min(4));
    let big = cube.dilate(1.5);
    let lo = big.lower();
    let step = big.side / (grid - 1) as f64;
    let total = grid.pow(dim as u32);
    let l = cube.side;

    let mut points = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut skipped = 0;
    for flat in 0..total {
        let idx = unravel(flat, &vec![grid; dim]);
        let a: Vec<f64> = (0..dim).map(|i| lo[i] + idx[i] as f64 * step).collect();
        match psi(&a[..n], &a[n..]) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => {
                values.push(v.norm());
                points.push(a);
            }
            _ => skipped += 1,
        }
    }
    let sup0 = values.iter().copied().fold(0.0, f64::max);
    let mut per_order = vec![sup0];
    let mut warnings = Vec::new();
    if skipped > 0 {
        warnings.push(format!("{skipped} grid points could not be evaluated"));
    }
    for order in 1..=max_order {
        let h = l * f64::EPSILON.powf(1.0 / (order as f64 + 2.0));
        let floor = 1e-8 * (1.0 + sup0) / l.powi(order as i32);
        let mut best = 0.0_f64;
        let mut unstable = 0usize;
        for alpha in multi_indices(dim, order) {
            for a in &points {
                let (coarse, fine) = match (
                    derivative(psi, a, &alpha, h, n),
                    derivative(psi, a, &alpha, 0.5 * h, n),
                ) {
                    (Ok(c), Ok(f)) => (c.norm(), f.norm()),
                    _ => {
                        unstable += 1;
                        continue;
                    }
                };
                if (coarse - fine).abs() > 0.1 * fine.max(floor) {
                    unstable += 1;
                }
                best = best.max(fine);
            }
        }
        if unstable > 0 {
            warnings.push(format!(
                "order {order}: {unstable} derivative estimates disagree under step halving"
            ));
        }
        per_order.push(l.powi(order as i32) * best);
    }
    Ok(FouBound {
        bound: per_order.iter().copied().fold(0.0, f64::max),
        constant: 1.0,
        per_order,
        max_order,
        skipped_points: skipped,
        warnings,
    })
}

/// `sum |c_k|` for the Fourier series of `plateau * Psi` on the torus built
/// on the 3/2-dilate, plus twice the mass of the outermost dyadic shell as
/// an aliasing allowance.
///
/// The plateau equals 1 on the cube, so the sum bounds the multiplier norm
/// of `Psi` on `Q x R`: each term `exp(i<a,x>) exp(i<b,y>)` is a rank-one
/// multiplier of norm one.
pub fn coefficient_sum_bound(psi: Psi, cube: &ProductCube, grid: usize) -> Result<f64> {
    if grid < 4 || grid % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "grid must be an even integer >= 4, got {grid}"
        )));
    }
    let n = cube.n();
    let dim = 2 * n;
    let shape = vec![grid; dim];
    let total = grid
        .checked_pow(dim as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::InvalidArgument(format!("grid {grid}^{dim} is too large")))?;
    let big = cube.dilate(1.5);
    let lo = big.lower();
    let centers: Vec<f64> = cube.lower().iter().map(|v| v + 0.5 * cube.side).collect();
    let h = big.side / grid as f64;
    let mut data = vec![C64::new(0.0, 0.0); total];
    for (flat, slot) in data.iter_mut().enumerate() {
        let idx = unravel(flat, &shape);
        let a: Vec<f64> = (0..dim).map(|i| lo[i] + idx[i] as f64 * h).collect();
        let w: f64 = (0..dim).map(|i| plateau(a[i], centers[i], cube.side)).product();
        if w > 0.0 {
            *slot = psi(&a[..n], &a[n..])? * w;
        }
    }
    fftn(&mut data, &shape, false);
    let norm = 1.0 / total as f64;
    let mut sum = 0.0;
    let mut shell = 0.0;
    for (flat, v) in data.iter().enumerate() {
        let mag = v.norm() * norm;
        sum += mag;
        let idx = unravel(flat, &shape);
        let radius = idx
            .iter()
            .map(|&k| signed_index(k, grid).unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        if 4 * radius > grid {
            shell += mag;
        }
    }
    let remainder = 2.0 * shell;
    if remainder > 0.1 * sum {
        return Err(Error::GridTooCoarse(format!(
            "aliasing remainder {remainder:e} exceeds 10% of the coefficient sum {sum:e}; \
             use a larger grid than {grid}"
        )));
    }
    Ok(sum + remainder)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_at(lo: f64) -> ProductCube {
        ProductCube::new(vec![lo], vec![lo], 1.0).unwrap()
    }

    #[test]
    fn constant_and_linear() {
        let c = |_: &[f64], _: &[f64]| Ok(C64::new(-2.5, 0.0));
        let b = lemma_fou_bound(&c, &unit_at(0.0), &FouOptions::default()).unwrap();
        assert!((b.bound - 2.5).abs() < 1e-9, "{b:?}");
        let x1 = |x: &[f64], _: &[f64]| Ok(C64::new(x[0], 0.0));
        let b = lemma_fou_bound(&x1, &unit_at(-0.5), &FouOptions::default()).unwrap();
        assert!((b.bound - 1.0).abs() < 1e-6, "{b:?}");
        let b = lemma_fou_bound(&x1, &unit_at(0.0), &FouOptions::default()).unwrap();
        assert!((b.bound - 1.25).abs() < 1e-9, "{b:?}");
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(4, 2).len(), 10);
    }

    #[test]
    fn coefficient_sum_of_character() {
        let e = |x: &[f64], y: &[f64]| Ok(C64::from_polar(1.0, x[0] - y[0]));
        let cube = unit_at(0.0);
        let b32 = coefficient_sum_bound(&e, &cube, 32).unwrap();
        let b64 = coefficient_sum_bound(&e, &cube, 64).unwrap();
        assert!(b32 >= 1.0);
        assert!((b32 - b64).abs() < 0.05 * b64);
        assert!(coefficient_sum_bound(&e, &cube, 5).is_err());
    }
}
