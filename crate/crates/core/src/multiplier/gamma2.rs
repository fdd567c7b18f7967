//! Schur multiplier norms of finite matrices through the `gamma_2`
//! factorisation norm, with two-sided certificates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::GridFunction;
use crate::error::{Error, Result};
use crate::spectral::{eigh, CMatrix, HermitianMatrix};
use crate::C64;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 50_000;

/// Two-sided bound on `gamma_2(M)`.
///
/// `upper` is realised by the factorisation `M = P Q*` as the product of the
/// largest row norms; `lower` is a dual value `|D_u M D_v|_S1` with unit
/// `u, v` (or `max |M_ij|` if larger).
#[derive(Clone, Debug)]
pub struct MultiplierCertificate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub p: CMatrix,
    pub q: CMatrix,
    pub converged: bool,
    pub iterations: usize,
}

fn max_row_norm(m: &CMatrix) -> f64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

impl MultiplierCertificate {
    /// `max_ij |M - P Q*| / max(max_ij |M|, tiny)`.
    pub fn factorization_residual(&self, m: &CMatrix) -> f64 {
        let pq = &self.p * &self.q.adjoint();
        (&pq - m).max_abs() / m.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Recomputes the upper bound from the factors.
    pub fn factor_bound(&self) -> f64 {
        max_row_norm(&self.p) * max_row_norm(&self.q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            value: f64,
            lower: f64,
            upper: f64,
            gap: f64,
            converged: bool,
            iterations: usize,
            p: Vec<Vec<[f64; 2]>>,
            q: Vec<Vec<[f64; 2]>>,
        }
        let rows = |m: &CMatrix| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect()
        };
        serde_json::to_value(Out {
            value: self.value,
            lower: self.lower,
            upper: self.upper,
            gap: self.gap,
            converged: self.converged,
            iterations: self.iterations,
            p: rows(&self.p),
            q: rows(&self.q),
        })
        .expect("plain data serialises")
    }
}

/// Singular triplets of `c` through the Hermitian dilation: returns
/// `(s, U, V)` with `c = U diag(s) V*` over the positive singular values.
fn svd(c: &CMatrix) -> (Vec<f64>, CMatrix, CMatrix) {
    let (m, n) = (c.rows(), c.cols());
    let mut d = CMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            d[(i, m + j)] = c[(i, j)];
            d[(m + j, i)] = c[(i, j)].conj();
        }
    }
    let e = eigh(&HermitianMatrix::new(d).expect("dilation is Hermitian"));
    let k = m.min(n);
    let top: Vec<usize> = (0..m + n).rev().take(k).filter(|&t| e.values[t] > 0.0).collect();
    let s: Vec<f64> = top.iter().map(|&t| e.values[t]).collect();
    let sqrt2 = std::f64::consts::SQRT_2;
    let u = CMatrix::from_fn(m, s.len(), |i, r| e.vectors[(i, top[r])] * sqrt2);
    let v = CMatrix::from_fn(n, s.len(), |j, r| e.vectors[(m + j, top[r])] * sqrt2);
    (s, u, v)
}

struct Scaled {
    trace_norm: f64,
    ca: Vec<f64>,
    cb: Vec<f64>,
    s: Vec<f64>,
    u: CMatrix,
    v: CMatrix,
}

fn evaluate(m: &CMatrix, a: &[f64], b: &[f64]) -> Scaled {
    let c = CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * (a[i] * b[j]).sqrt());
    let (s, u, v) = svd(&c);
    let weight = |w: &CMatrix, i: usize| -> f64 {
        (0..s.len()).map(|r| s[r] * w[(i, r)].norm_sqr()).sum()
    };
    Scaled {
        trace_norm: s.iter().sum(),
        ca: (0..m.rows()).map(|i| weight(&u, i)).collect(),
        cb: (0..m.cols()).map(|j| weight(&v, j)).collect(),
        s,
        u,
        v,
    }
}

fn upper_of(st: &Scaled, a: &[f64], b: &[f64]) -> f64 {
    let ra = st.ca.iter().zip(a).map(|(c, w)| c / w).fold(0.0, f64::max);
    let rb = st.cb.iter().zip(b).map(|(c, w)| c / w).fold(0.0, f64::max);
    (ra * rb).sqrt()
}

/// `P = D_a^{-1/2} U S^{1/2}`, `Q = D_b^{-1/2} V S^{1/2}`.
fn factors(st: &Scaled, a: &[f64], b: &[f64]) -> (CMatrix, CMatrix) {
    let r = st.s.len().max(1);
    let p = CMatrix::from_fn(a.len(), r, |i, k| {
        if k < st.s.len() {
            st.u[(i, k)] * (st.s[k] / a[i]).sqrt()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let q = CMatrix::from_fn(b.len(), r, |j, k| {
        if k < st.s.len() {
            st.v[(j, k)] * (st.s[k] / b[j]).sqrt()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    (p, q)
}

const WEIGHT_FLOOR: f64 = 1e-8;

fn step_weights(w: &[f64], c: &[f64], g: f64, step: f64) -> Vec<f64> {
    let mut out: Vec<f64> = w
        .iter()
        .zip(c)
        .map(|(wi, ci)| (wi + step * (ci / g - wi)).max(WEIGHT_FLOOR))
        .collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

/// Core solver on a matrix without zero rows or columns.
fn solve_dense(m: &CMatrix, tol: f64, max_iter: usize) -> MultiplierCertificate {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![1.0 / rows as f64; rows];
    let mut b = vec![1.0 / cols as f64; cols];
    let entry_bound = m.max_abs();
    let mut st = evaluate(m, &a, &b);
    let mut best_lower = st.trace_norm.max(entry_bound);
    let mut best_upper = upper_of(&st, &a, &b);
    let mut best = factors(&st, &a, &b);
    let mut iterations = 0;
    while best_upper - best_lower > tol && iterations < max_iter {
        iterations += 1;
        let g = st.trace_norm;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let na = step_weights(&a, &st.ca, g, step);
            let nb = step_weights(&b, &st.cb, g, step);
            let ns = evaluate(m, &na, &nb);
            if ns.trace_norm >= g {
                accepted = Some((na, nb, ns));
                break;
            }
            step *= 0.5;
        }
        let Some((na, nb, ns)) = accepted else {
            break;
        };
        let progress = ns.trace_norm - g;
        a = na;
        b = nb;
        st = ns;
        best_lower = best_lower.max(st.trace_norm);
        let up = upper_of(&st, &a, &b);
        if up < best_upper {
            best_upper = up;
            best = factors(&st, &a, &b);
        }
        if progress <= f64::EPSILON * g && step < 1e-9 {
            break;
        }
    }
    let (p, q) = best;
    finish(p, q, best_lower, best_upper, tol, iterations)
}

fn finish(
    p: CMatrix,
    q: CMatrix,
    lower: f64,
    upper: f64,
    tol: f64,
    iterations: usize,
) -> MultiplierCertificate {
    let upper = upper.max(lower);
    let gap = upper - lower;
    MultiplierCertificate {
        value: 0.5 * (lower + upper),
        lower,
        upper,
        gap,
        p,
        q,
        converged: gap <= tol,
        iterations,
    }
}

/// Rows with weights near the floor lose digits when `D^{-1/2}` is applied,
/// so `P Q*` can miss `M` by more than rounding. Appending `[lam E]` to `P`
/// and `[I / lam]` to `Q` with `E = M - P Q*` absorbs the residual at a cost
/// of `O(|E|)` in the bound.
fn repair(m: &CMatrix, p: &CMatrix, q: &CMatrix) -> (CMatrix, CMatrix) {
    let e = m - &(p * &q.adjoint());
    let size = max_row_norm(&e);
    if size <= f64::EPSILON * m.max_abs() {
        return (p.clone(), q.clone());
    }
    // Minimises (A + lam^2 |E|^2)(B + 1 / lam^2) to first order.
    let (a, b) = (max_row_norm(p), max_row_norm(q));
    let lam = if a > 0.0 && b > 0.0 { (a / (b * size)).sqrt() } else { size.sqrt().recip() };
    let (r, c) = (p.cols(), m.cols());
    let pe = CMatrix::from_fn(m.rows(), r + c, |i, k| if k < r { p[(i, k)] } else { e[(i, k - r)] * lam });
    let qe = CMatrix::from_fn(c, r + c, |j, k| {
        if k < r {
            q[(j, k)]
        } else if k - r == j {
            C64::new(1.0 / lam, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    (pe, qe)
}

/// Alternating projections between the PSD cone and the affine set
/// `{[[X, M], [M*, Y]] : diag <= t}`. The final affine iterate `Z` is
/// shifted by its most negative eigenvalue `mu`, giving a PSD completion
/// with diagonal at most `t + |mu|` and hence a factorisation of `M`.
fn alternating_projection_bound(
    m: &CMatrix,
    t: f64,
    iterations: usize,
) -> Option<(f64, CMatrix, CMatrix)> {
    let (rows, cols) = (m.rows(), m.cols());
    let size = rows + cols;
    let mut z = CMatrix::zeros(size, size);
    let project_affine = |z: &mut CMatrix| {
        for i in 0..rows {
            for j in 0..cols {
                z[(i, rows + j)] = m[(i, j)];
                z[(rows + j, i)] = m[(i, j)].conj();
            }
        }
        for k in 0..size {
            let d = z[(k, k)].re.min(t);
            z[(k, k)] = C64::new(d, 0.0);
        }
    };
    for k in 0..size {
        z[(k, k)] = C64::new(t, 0.0);
    }
    project_affine(&mut z);
    for _ in 0..iterations {
        let e = eigh(&HermitianMatrix::new(z.hermitian_part()).ok()?);
        let clipped: Vec<f64> = e.values.iter().map(|v| v.max(0.0)).collect();
        let d = CMatrix::from_fn(size, size, |i, k| e.vectors[(i, k)] * clipped[k]);
        z = (&d * &e.vectors.adjoint()).hermitian_part();
        project_affine(&mut z);
    }
    let e = eigh(&HermitianMatrix::new(z.hermitian_part()).ok()?);
    let shift = (-e.values[0]).max(0.0);
    let lam: Vec<f64> = e.values.iter().map(|v| (v + shift).max(0.0).sqrt()).collect();
    let g = CMatrix::from_fn(size, size, |i, k| e.vectors[(i, k)] * lam[k]);
    let p = CMatrix::from_fn(rows, size, |i, k| g[(i, k)]);
    let q = CMatrix::from_fn(cols, size, |j, k| g[(rows + j, k)]);
    let bound = max_row_norm(&p) * max_row_norm(&q);
    Some((bound, p, q))
}

/// Certified `gamma_2(M) = min { max_k |row_k P| max_l |row_l Q| : M = P Q* }`.
///
/// The primary route is a monotone ascent on the dual
/// `max { |D_u M D_v|_S1 : |u| = |v| = 1 }`; every iterate carries an exact
/// factorisation built from the scaled SVD, so the returned bounds are
/// two-sided at all times. If the gap is still open at the iteration cap,
/// alternating projections are tried as an upper-bound polish.
pub fn gamma2_norm(m: &CMatrix, tol: f64) -> Result<MultiplierCertificate> {
    gamma2_norm_with_cap(m, tol, MAX_ITERATIONS)
}

pub fn gamma2_norm_with_cap(m: &CMatrix, tol: f64, max_iter: usize) -> Result<MultiplierCertificate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if m.as_slice().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let live_rows: Vec<usize> = (0..m.rows())
        .filter(|&i| m.row(i).iter().any(|z| z.norm() > 0.0))
        .collect();
    let live_cols: Vec<usize> = (0..m.cols())
        .filter(|&j| (0..m.rows()).any(|i| m[(i, j)].norm() > 0.0))
        .collect();
    if live_rows.is_empty() {
        return Ok(finish(
            CMatrix::zeros(m.rows(), 1),
            CMatrix::zeros(m.cols(), 1),
            0.0,
            0.0,
            tol,
            0,
        ));
    }
    let sub = CMatrix::from_fn(live_rows.len(), live_cols.len(), |i, j| {
        m[(live_rows[i], live_cols[j])]
    });
    // Half the budget is left for the repair below.
    let mut cert = solve_dense(&sub, 0.5 * tol, max_iter);
    if !cert.converged {
        polish(&sub, &mut cert, 0.5 * tol);
    }
    let (p, q) = repair(&sub, &cert.p, &cert.q);
    let upper = cert.upper.max(max_row_norm(&p) * max_row_norm(&q));
    cert = finish(p, q, cert.lower, upper, tol, cert.iterations);
    let embed = |f: &CMatrix, live: &[usize], total: usize| {
        let mut out = CMatrix::zeros(total, f.cols());
        for (k, &i) in live.iter().enumerate() {
            for c in 0..f.cols() {
                out[(i, c)] = f[(k, c)];
            }
        }
        out
    };
    cert.p = embed(&cert.p, &live_rows, m.rows());
    cert.q = embed(&cert.q, &live_cols, m.cols());
    Ok(cert)
}

fn polish(m: &CMatrix, cert: &mut MultiplierCertificate, tol: f64) {
    let (mut lo, mut hi) = (cert.lower, cert.upper);
    for _ in 0..8 {
        let t = 0.5 * (lo + hi);
        match alternating_projection_bound(m, t, 200) {
            Some((bound, p, q)) if bound < cert.upper => {
                cert.upper = bound;
                cert.p = p;
                cert.q = q;
                hi = t;
            }
            _ => lo = t,
        }
        if hi - lo <= tol {
            break;
        }
    }
    let fresh = finish(
        cert.p.clone(),
        cert.q.clone(),
        cert.lower,
        cert.upper,
        tol,
        cert.iterations,
    );
    *cert = fresh;
}

/// `max |M o B|_op / |B|_op` over the identity, the all-ones matrix, the
/// matrix unit at the largest entry, and `probes` seeded random `B`.
/// Always a lower bound for `gamma_2(M)`.
pub fn gamma2_lower_probe(m: &CMatrix, probes: usize, seed: u64) -> Result<f64> {
    if probes == 0 {
        return Err(Error::InvalidArgument("at least one probe is required".into()));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let one = C64::new(1.0, 0.0);
    let mut argmax = (0, 0);
    for i in 0..rows {
        for j in 0..cols {
            if m[(i, j)].norm() > m[argmax].norm() {
                argmax = (i, j);
            }
        }
    }
    let mut candidates = vec![
        CMatrix::from_fn(rows, cols, |i, j| if i == j { one } else { C64::new(0.0, 0.0) }),
        CMatrix::from_fn(rows, cols, |_, _| one),
        CMatrix::from_fn(rows, cols, |i, j| {
            if (i, j) == argmax {
                one
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        candidates.push(CMatrix::gaussian(rows, cols, &mut rng));
    }
    let mut best = 0.0_f64;
    for b in &candidates {
        let nb = b.op_norm();
        if nb > 0.0 {
            best = best.max(m.hadamard(b)?.op_norm() / nb);
        }
    }
    Ok(best)
}

/// `gamma_2` of `M[k, l] = phi(x_k, y_l)`: a lower bound for the multiplier
/// norm of `phi` on any sets containing the grids.
pub fn multiplier_norm_on_grid(
    phi: &GridFunction,
    grid_x: &[Vec<f64>],
    grid_y: &[Vec<f64>],
    tol: f64,
) -> Result<MultiplierCertificate> {
    if grid_x.is_empty() || grid_y.is_empty() {
        return Err(Error::InvalidArgument("grids must be nonempty".into()));
    }
    let m = sample_symbol(phi, grid_x, grid_y)?;
    gamma2_norm(&m, tol)
}

pub fn sample_symbol(phi: &GridFunction, grid_x: &[Vec<f64>], grid_y: &[Vec<f64>]) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(grid_x.len(), grid_y.len());
    for (k, x) in grid_x.iter().enumerate() {
        for (l, y) in grid_y.iter().enumerate() {
            m[(k, l)] = phi.eval(x, y)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[Vec<f64>]) -> CMatrix {
        CMatrix::from_real_rows(rows)
    }

    #[test]
    fn ones_and_identity() {
        let ones = CMatrix::from_fn(5, 5, |_, _| C64::new(1.0, 0.0));
        let c = gamma2_norm(&ones, 1e-8).unwrap();
        assert!((c.value - 1.0).abs() < 1e-8 && c.converged);
        let id = CMatrix::identity(5);
        let c = gamma2_norm(&id, 1e-8).unwrap();
        assert!((c.value - 1.0).abs() < 1e-8 && c.converged);
        assert!(c.factorization_residual(&id) < 1e-9);
    }

    #[test]
    fn triangle_fixture() {
        let m = real(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let c = gamma2_norm(&m, 1e-9).unwrap();
        assert!((c.value - 2.0 / 3f64.sqrt()).abs() < 1e-8, "{}", c.value);
        assert!(c.factorization_residual(&m) < 1e-9);
        assert!((c.factor_bound() - c.upper).abs() < 1e-9);
    }

    #[test]
    fn zero_rows_and_matrix() {
        let m = real(&[vec![0.0, 0.0], vec![0.0, 3.0]]);
        let c = gamma2_norm(&m, 1e-9).unwrap();
        assert!((c.value - 3.0).abs() < 1e-8);
        assert!(c.factorization_residual(&m) < 1e-12);
        let z = CMatrix::zeros(3, 2);
        assert_eq!(gamma2_norm(&z, 1e-6).unwrap().value, 0.0);
    }

    #[test]
    fn probe_examples() {
        let ones = CMatrix::from_fn(4, 4, |_, _| C64::new(1.0, 0.0));
        assert!((gamma2_lower_probe(&ones, 1, 0).unwrap() - 1.0).abs() < 1e-12);
        let d = CMatrix::from_diag(&[0.5, -2.0, 1.0]);
        assert!((gamma2_lower_probe(&d, 3, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_projection_is_a_valid_upper_bound() {
        let m = real(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let (bound, p, q) = alternating_projection_bound(&m, 1.2, 300).unwrap();
        assert!(bound >= 2.0 / 3f64.sqrt() - 1e-9);
        assert!((&(&p * &q.adjoint()) - &m).max_abs() < 1e-9);
    }
}
