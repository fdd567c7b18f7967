use super::eigen::jacobi;
use super::CMatrix;
use crate::error::{Error, Result};

/// Singular values of `t` in descending order.
///
/// Computed as the top `min(m, n)` eigenvalues of the Hermitian dilation
/// `[[0, T], [T*, 0]]`, clamped at zero.
pub fn singular_values(t: &CMatrix) -> Vec<f64> {
    let (m, n) = (t.rows(), t.cols());
    let k = m.min(n);
    if k == 0 {
        return Vec::new();
    }
    let mut d = CMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            d[(i, m + j)] = t[(i, j)];
            d[(m + j, i)] = t[(i, j)].conj();
        }
    }
    let eig = jacobi(&d);
    eig.values.iter().rev().take(k).map(|&s| s.max(0.0)).collect()
}

/// Schatten `p`-norm `(sum s_k^p)^{1/p}`; `p = f64::INFINITY` gives the
/// operator norm. For `0 < p < 1` this is the usual quasi-norm.
pub fn schatten_norm(t: &CMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Schatten exponent must be positive, got {p}"
        )));
    }
    let s = singular_values(t);
    let top = s.first().copied().unwrap_or(0.0);
    if p.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    let sum: f64 = s.iter().map(|x| (x / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}
