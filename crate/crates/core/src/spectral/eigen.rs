//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64 as C64;

use super::{CMatrix, HermitianMatrix};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching unitary of eigenvectors
/// (columns), so that `H = U diag(values) U*`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let scaled = CMatrix::from_fn(n, n, |i, k| self.vectors[(i, k)] * self.values[k]);
        &scaled * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Output is a deterministic function of the input: sweeps run in fixed
/// `(p, q)` order, ties in the ascending sort keep Jacobi order, and every
/// eigenvector is phase-normalised so its largest-modulus entry (first one
/// on ties) is real positive.
pub fn eigh(h: &HermitianMatrix) -> EigenDecomposition {
    jacobi(h.as_matrix())
}

pub(crate) fn jacobi(input: &CMatrix) -> EigenDecomposition {
    let n = input.rows();
    let mut a = input.clone();
    let mut v = CMatrix::identity(n);

    let total = a.frobenius_norm();
    if n > 1 && total > 0.0 {
        let threshold = f64::EPSILON * total;
        for _sweep in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = v.select_cols(&order);
    normalize_phases(&mut vectors);
    EigenDecomposition { values, vectors }
}

/// Annihilate `a[p][q]` with the unitary `G = diag(1, e^{-i phi}) J(c, s)`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let g = h.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change anything in floating point.
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase_conj = (h / g).conj();
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn normalize_phases(vectors: &mut CMatrix) {
    for k in 0..vectors.cols() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..vectors.rows() {
            let m = vectors[(i, k)].norm();
            if m > best_abs * (1.0 + 1e-12) {
                best = i;
                best_abs = m;
            }
        }
        if best_abs > 0.0 {
            let phase = vectors[(best, k)].conj() / best_abs;
            for i in 0..vectors.rows() {
                vectors[(i, k)] *= phase;
            }
            vectors[(best, k)].im = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        HermitianMatrix::new(CMatrix::gaussian(dim, dim, &mut rng).hermitian_part()).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let h = HermitianMatrix::new(CMatrix::from_diag(&[3.0, 1.0])).unwrap();
        let e = eigh(&h);
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert_eq!(e.vectors[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(e.vectors[(0, 1)], C64::new(1.0, 0.0));
    }

    #[test]
    fn pauli_x() {
        let h = HermitianMatrix::new(CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]))
            .unwrap();
        let e = eigh(&h);
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_reconstruction_8x8() {
        let h = random_hermitian(8, 11);
        let e = eigh(&h);
        let resid = (&e.reconstruct() - h.as_matrix()).op_norm();
        assert!(resid <= 1e-10 * (1.0 + h.as_matrix().op_norm()), "{resid}");
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn deterministic() {
        let h = random_hermitian(7, 5);
        let a = eigh(&h);
        let b = eigh(&h);
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn one_by_one_and_zero() {
        let h = HermitianMatrix::new(CMatrix::from_diag(&[-2.5])).unwrap();
        assert_eq!(eigh(&h).values, vec![-2.5]);
        let z = HermitianMatrix::new(CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eigh(&z).values, vec![0.0; 3]);
    }
}
