//! Commuting tuples and their joint eigensystems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::jacobi;
use super::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_COMMUTATION_TOL: f64 = 1e-8;

const COMBINATION_SEED: u64 = 0x6a6f_696e_745f_6469;

/// `n` pairwise commuting Hermitian matrices of a common dimension.
#[derive(Clone, Debug)]
pub struct CommutingTuple {
    matrices: Vec<HermitianMatrix>,
    commutation_tol: f64,
}

impl CommutingTuple {
    /// Validates `max_{i<j} |[A_i, A_j]| <= commutation_tol * max_k |A_k|`.
    pub fn new(matrices: Vec<HermitianMatrix>, commutation_tol: f64) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidArgument("empty tuple".into()));
        }
        if !(commutation_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "commutation tolerance must be nonnegative, got {commutation_tol}"
            )));
        }
        let dim = matrices[0].dim();
        if let Some(bad) = matrices.iter().position(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "matrix {bad} has dim {} but matrix 0 has dim {dim}",
                matrices[bad].dim()
            )));
        }
        let scale = matrices.iter().map(|m| m.op_norm()).fold(0.0, f64::max);
        let (defect, pair) = worst_commutator(&matrices);
        let allowed = commutation_tol * scale;
        if defect > allowed {
            let (i, j) = pair.unwrap_or((0, 0));
            return Err(Error::NotCommuting {
                i,
                j,
                defect,
                allowed,
            });
        }
        Ok(CommutingTuple {
            matrices,
            commutation_tol,
        })
    }

    pub fn with_default_tol(matrices: Vec<HermitianMatrix>) -> Result<Self> {
        Self::new(matrices, DEFAULT_COMMUTATION_TOL)
    }

    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn get(&self, j: usize) -> &HermitianMatrix {
        &self.matrices[j]
    }

    pub fn commutation_tol(&self) -> f64 {
        self.commutation_tol
    }

    pub fn max_op_norm(&self) -> f64 {
        self.matrices.iter().map(|m| m.op_norm()).fold(0.0, f64::max)
    }
}

/// `max_{i<j} |A_i A_j - A_j A_i|_op`.
pub fn commutation_defect(t: &CommutingTuple) -> f64 {
    worst_commutator(&t.matrices).0
}

fn worst_commutator(ms: &[HermitianMatrix]) -> (f64, Option<(usize, usize)>) {
    let mut worst = 0.0;
    let mut pair = None;
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            let a = ms[i].as_matrix();
            let b = ms[j].as_matrix();
            let d = (&(a * b) - &(b * a)).op_norm();
            if pair.is_none() || d > worst {
                worst = d;
                pair = Some((i, j));
            }
        }
    }
    (worst, pair)
}

/// A unitary basis `U` together with the joint spectrum: column `k` of `U`
/// is a joint eigenvector with eigenvalue `spectrum[k][j]` for `A_j`.
///
/// This is the finitely supported spectral measure of the tuple; its atoms
/// are the points `spectrum[k]` with rank-one projections `u_k u_k*`.
#[derive(Clone, Debug)]
pub struct JointEigensystem {
    basis: CMatrix,
    spectrum: Vec<Vec<f64>>,
}

impl JointEigensystem {
    /// Checks `|U*U - I| <= 1e-10` and that all points share one arity.
    pub fn new(basis: CMatrix, spectrum: Vec<Vec<f64>>) -> Result<Self> {
        let dim = basis.rows();
        if !basis.is_square() || spectrum.len() != dim || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "basis {}x{} with {} spectrum points",
                basis.rows(),
                basis.cols(),
                spectrum.len()
            )));
        }
        let n = spectrum[0].len();
        if n == 0 || spectrum.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch(
                "spectrum points must share a positive arity".into(),
            ));
        }
        let js = JointEigensystem { basis, spectrum };
        let defect = js.unitarity_defect();
        if defect > 1e-10 {
            return Err(Error::ContractViolation(format!(
                "basis is not unitary: |U*U - I| = {defect:e}"
            )));
        }
        Ok(js)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn n(&self) -> usize {
        self.spectrum[0].len()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn spectrum(&self) -> &[Vec<f64>] {
        &self.spectrum
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.spectrum[k]
    }

    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.basis.adjoint() * &self.basis) - &CMatrix::identity(self.dim())).op_norm()
    }

    /// `U diag(lambda_j) U*`.
    pub fn reconstruct(&self, j: usize) -> CMatrix {
        let dim = self.dim();
        let scaled = CMatrix::from_fn(dim, dim, |i, k| self.basis[(i, k)] * self.spectrum[k][j]);
        &scaled * &self.basis.adjoint()
    }

    /// `max_j |A_j - U diag(lambda_j) U*| / (1 + |A_j|)`.
    pub fn reconstruction_residual(&self, t: &CommutingTuple) -> f64 {
        (0..t.n())
            .map(|j| {
                let a = t.get(j).as_matrix();
                (&self.reconstruct(j) - a).op_norm() / (1.0 + a.op_norm())
            })
            .fold(0.0, f64::max)
    }
}

/// Default cluster tolerance: `1e-8 * max_j |A_j|`.
pub fn default_cluster_tol(t: &CommutingTuple) -> f64 {
    1e-8 * t.max_op_norm()
}

/// Simultaneous diagonalisation of a commuting tuple.
///
/// A seeded random real combination `sum_j c_j A_j` is diagonalised first;
/// eigenvalue clusters (consecutive gaps `<= cluster_tol`, scaled by
/// `sum |c_j|` for the combination) are refined by diagonalising `A_0`,
/// `A_1`, ... restricted to the cluster subspace, recursively.
pub fn joint_diagonalize(t: &CommutingTuple, cluster_tol: f64) -> Result<JointEigensystem> {
    if !(cluster_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cluster tolerance must be nonnegative, got {cluster_tol}"
        )));
    }
    let defect = commutation_defect(t);
    let allowed = t.commutation_tol * t.max_op_norm();
    if defect > allowed {
        let (_, pair) = worst_commutator(&t.matrices);
        let (i, j) = pair.unwrap_or((0, 0));
        return Err(Error::NotCommuting {
            i,
            j,
            defect,
            allowed,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(COMBINATION_SEED);
    let coeffs: Vec<f64> = (0..t.n()).map(|_| rng.random_range(0.5..1.5)).collect();
    let dim = t.dim();
    let mats: Vec<&CMatrix> = t.matrices.iter().map(|m| m.as_matrix()).collect();

    let basis = refine(&mats, &coeffs, CMatrix::identity(dim), 0, cluster_tol);

    let adj = basis.adjoint();
    let diagonals: Vec<CMatrix> = mats.iter().map(|a| &(&adj * a) * &basis).collect();
    let spectrum = (0..dim)
        .map(|k| diagonals.iter().map(|d| d[(k, k)].re).collect())
        .collect();
    JointEigensystem::new(basis, spectrum)
}

pub fn joint_diagonalize_default(t: &CommutingTuple) -> Result<JointEigensystem> {
    joint_diagonalize(t, default_cluster_tol(t))
}

fn refine(
    mats: &[&CMatrix],
    coeffs: &[f64],
    basis: CMatrix,
    level: usize,
    cluster_tol: f64,
) -> CMatrix {
    let target = if level == 0 {
        let dim = mats[0].rows();
        let mut c = CMatrix::zeros(dim, dim);
        for (a, &w) in mats.iter().zip(coeffs) {
            c = &c + &a.scale_real(w);
        }
        c
    } else {
        mats[level - 1].clone()
    };
    let restricted = (&(&basis.adjoint() * &target) * &basis).hermitian_part();
    let eig = jacobi(&restricted);
    let mut rotated = &basis * &eig.vectors;
    if level == mats.len() {
        return rotated;
    }
    let threshold = if level == 0 {
        cluster_tol * coeffs.iter().map(|c| c.abs()).sum::<f64>()
    } else {
        cluster_tol
    };
    let m = eig.values.len();
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && eig.values[end] - eig.values[end - 1] <= threshold {
            end += 1;
        }
        if end - start > 1 {
            let idx: Vec<usize> = (start..end).collect();
            let sub = rotated.select_cols(&idx);
            let refined = refine(mats, coeffs, sub, level + 1, cluster_tol);
            for (offset, k) in idx.iter().enumerate() {
                rotated.set_col(*k, &refined.col(offset));
            }
        }
        start = end;
    }
    rotated
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn herm(m: CMatrix) -> HermitianMatrix {
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn diagonal_tuple() {
        let t = CommutingTuple::with_default_tol(vec![
            herm(CMatrix::from_diag(&[1.0, 2.0, 3.0])),
            herm(CMatrix::from_diag(&[5.0, 5.0, -1.0])),
        ])
        .unwrap();
        let js = joint_diagonalize_default(&t).unwrap();
        assert!(js.reconstruction_residual(&t) < 1e-12);
        let mut pts: Vec<Vec<f64>> = js.spectrum().to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(pts, vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, -1.0]]);
        // Basis is a phase-permutation.
        for k in 0..3 {
            let col = js.basis().col(k);
            let big = col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-12).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn fully_degenerate_identity_pair() {
        let t = CommutingTuple::with_default_tol(vec![
            herm(CMatrix::identity(4)),
            herm(CMatrix::identity(4)),
        ])
        .unwrap();
        let js = joint_diagonalize_default(&t).unwrap();
        assert!(js.reconstruction_residual(&t) < 1e-12);
    }

    #[test]
    fn rejects_pauli_pair() {
        let x = herm(CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]));
        let z = herm(CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]));
        let err = CommutingTuple::with_default_tol(vec![x.clone(), z.clone()]).unwrap_err();
        assert!(matches!(err, Error::NotCommuting { i: 0, j: 1, .. }), "{err}");
        // Accepted with a loose tolerance, then the defect is exactly 2.
        let t = CommutingTuple::new(vec![x, z], 10.0).unwrap();
        assert!((commutation_defect(&t) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn a_and_a_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = CMatrix::gaussian(6, 6, &mut rng).hermitian_part();
        let a2 = (&a * &a).hermitian_part();
        let t = CommutingTuple::with_default_tol(vec![herm(a), herm(a2)]).unwrap();
        let js = joint_diagonalize_default(&t).unwrap();
        assert!(js.reconstruction_residual(&t) < 1e-10);
        for p in js.spectrum() {
            assert!((p[1] - p[0] * p[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn unitary_check_in_constructor() {
        let mut b = CMatrix::identity(2);
        b[(0, 1)] = C64::new(0.1, 0.0);
        assert!(JointEigensystem::new(b, vec![vec![0.0], vec![1.0]]).is_err());
    }
}
