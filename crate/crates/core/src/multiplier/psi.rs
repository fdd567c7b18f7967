use super::cutoff::{xi, xi_extended};
use crate::calculus::{phase_quotient, BandlimitedFunction, GridFunction};
use crate::dyadic::{maximal_admissible, DyadicCube, Window};
use crate::error::Result;
use crate::C64;

/// The pieces `Psi_j` with `f(x) - f(y) = sum_j (x_j - y_j) Psi_j(x, y)`.
///
/// The plane `R^n x R^n` is split into maximal admissible dyadic cubes of a
/// lattice with unit cell `unit`. On unit cells `Psi_j` is the segment
/// average of `D_j f`; on larger cells of side `l` it is
/// `(f(x) - f(y)) Xi_j(x, y)`.
#[derive(Clone, Copy, Debug)]
pub struct PsiConstruction<'f> {
    f: &'f BandlimitedFunction,
    unit: f64,
}

/// Which formula a pair falls under, with the cube in lattice units.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiCell {
    pub cube: DyadicCube,
    /// Sidelength in the original coordinates.
    pub side: f64,
}

impl PsiCell {
    pub fn is_unit(&self) -> bool {
        self.cube.m == 0
    }
}

impl<'f> PsiConstruction<'f> {
    /// Unit dyadic lattice.
    pub fn new(f: &'f BandlimitedFunction) -> Self {
        PsiConstruction { f, unit: 1.0 }
    }

    /// Lattice with unit cell `1/sigma`, so that every piece carries the
    /// factor `sigma` explicitly; unit cell 1 for constant `f`.
    pub fn for_bandwidth(f: &'f BandlimitedFunction) -> Self {
        let s = f.sigma();
        PsiConstruction {
            f,
            unit: if s > 0.0 { 1.0 / s } else { 1.0 },
        }
    }

    pub fn with_unit(f: &'f BandlimitedFunction, unit: f64) -> Self {
        assert!(unit > 0.0 && unit.is_finite(), "unit cell must be positive");
        PsiConstruction { f, unit }
    }

    pub fn function(&self) -> &BandlimitedFunction {
        self.f
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    fn scaled(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|a| a / self.unit).collect()
    }

    pub fn cell(&self, x: &[f64], y: &[f64]) -> PsiCell {
        let cube = maximal_admissible(&self.scaled(x), &self.scaled(y));
        let side = cube.sidelength() * self.unit;
        PsiCell { cube, side }
    }

    /// `int_0^1 (D_j f)((1-t) x + t y) dt`, exact term by term.
    pub fn segment_average(&self, j: usize, x: &[f64], y: &[f64]) -> C64 {
        self.f
            .terms()
            .iter()
            .map(|t| {
                let at_x: f64 = t.xi.iter().zip(x).map(|(a, b)| a * b).sum();
                let step: f64 = t.xi.iter().zip(x.iter().zip(y)).map(|(a, (u, v))| a * (v - u)).sum();
                t.c * C64::new(0.0, t.xi[j]) * C64::from_polar(1.0, at_x) * phase_quotient(step)
            })
            .sum()
    }

    /// `Psi_j(x, y)` by dispatch on the maximal cube containing `(x, y)`.
    pub fn psi(&self, j: usize, x: &[f64], y: &[f64]) -> Result<C64> {
        let cell = self.cell(x, y);
        if cell.is_unit() {
            Ok(self.segment_average(j, x, y))
        } else {
            let diff = self.f.eval_c(x) - self.f.eval_c(y);
            Ok(diff * xi(x, y, cell.side, j)?)
        }
    }

    /// The formula of `cell` evaluated at an arbitrary pair: the smooth
    /// function whose restriction to the cell is `Psi_j`.
    pub fn piece_formula(&self, cell: &PsiCell, j: usize, x: &[f64], y: &[f64]) -> Result<C64> {
        if cell.is_unit() {
            Ok(self.segment_average(j, x, y))
        } else {
            let diff = self.f.eval_c(x) - self.f.eval_c(y);
            Ok(diff * xi_extended(x, y, cell.side, j)?)
        }
    }

    /// `|f(x) - f(y) - sum_j (x_j - y_j) Psi_j(x, y)|`.
    pub fn identity_residual(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let mut sum = C64::new(0.0, 0.0);
        for j in 0..self.n() {
            sum += self.psi(j, x, y)? * (x[j] - y[j]);
        }
        Ok((self.f.eval_c(x) - self.f.eval_c(y) - sum).norm())
    }

    pub fn identity_tolerance(&self, x: &[f64], y: &[f64]) -> f64 {
        1e-9 * (1.0 + self.f.eval_c(x).norm() + self.f.eval_c(y).norm())
    }

    /// `Psi_j` as the symbol of a double operator integral.
    pub fn kernel(&self, j: usize) -> GridFunction<'f> {
        let me = *self;
        GridFunction::new(format!("Psi_{}({})", j + 1, crate::calculus::RnFunction::name(self.f)), self.n(), move |x, y| me.psi(j, x, y))
    }
}

/// Outcome of [`PsiConstruction::identity_sweep`].
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySweep {
    pub pairs: usize,
    /// Pairs that fell on cells larger than the unit cell.
    pub large_cells: usize,
    /// Largest `identity_residual / identity_tolerance`.
    pub worst: f64,
    pub worst_pair: (Vec<f64>, Vec<f64>),
}

impl IdentitySweep {
    pub fn ok(&self) -> bool {
        self.worst <= 1.0
    }
}

impl PsiConstruction<'_> {
    /// Checks the identity on `pairs` seeded pairs from `window`: even pairs
    /// are independent, odd pairs have `|x - y|` log-uniform between `1e-9`
    /// and the window diameter.
    pub fn identity_sweep(&self, window: &Window, pairs: usize, seed: u64) -> Result<IdentitySweep> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let diam = window
            .lo
            .iter()
            .zip(&window.hi)
            .map(|(a, b)| (b - a).powi(2))
            .sum::<f64>()
            .sqrt();
        let mut out = IdentitySweep {
            pairs,
            large_cells: 0,
            worst: 0.0,
            worst_pair: (Vec::new(), Vec::new()),
        };
        for k in 0..pairs {
            let x = window.sample(&mut rng);
            let y = if k % 2 == 0 {
                window.sample(&mut rng)
            } else {
                let r = diam * (1e-9f64).powf(rng.random::<f64>());
                let dir: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
                x.iter().zip(&dir).map(|(a, d)| a + r * d / len).collect()
            };
            if !self.cell(&x, &y).is_unit() {
                out.large_cells += 1;
            }
            let ratio = self.identity_residual(&x, &y)? / self.identity_tolerance(&x, &y);
            if ratio > out.worst || out.worst_pair.0.is_empty() {
                out.worst = out.worst.max(ratio);
                out.worst_pair = (x, y);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{RnFunction, Term};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_is_partial() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = BandlimitedFunction::random(2, 5, 3.0, &mut rng);
        let c = PsiConstruction::new(&f);
        let x = [0.3, -2.2];
        for j in 0..2 {
            let p = c.psi(j, &x, &x).unwrap();
            assert!((p - f.partial(j, &x).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_on_both_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let f = BandlimitedFunction::random(n, 6, 4.0, &mut rng);
            for c in [PsiConstruction::new(&f), PsiConstruction::for_bandwidth(&f)] {
                let mut seen_large = false;
                for _ in 0..300 {
                    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
                    let y: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
                    seen_large |= !c.cell(&x, &y).is_unit();
                    assert!(c.identity_residual(&x, &y).unwrap() <= c.identity_tolerance(&x, &y));
                }
                assert!(seen_large);
            }
        }
    }

    #[test]
    fn exponential_closed_form() {
        let f = BandlimitedFunction::new(
            1,
            vec![Term {
                xi: vec![1.5],
                c: C64::new(1.0, 0.0),
            }],
        )
        .unwrap();
        let c = PsiConstruction::new(&f);
        let (x, y) = ([0.2], [0.9]);
        let expect = (f.eval_c(&x) - f.eval_c(&y)) / (x[0] - y[0]);
        assert!((c.psi(0, &x, &y).unwrap() - expect).norm() < 1e-14);
    }
}
