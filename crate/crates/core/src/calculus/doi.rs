//! Functional calculus and double operator integrals for finitely
//! supported spectral measures.

use super::function::{GridFunction, RnFunction};
use crate::error::{Error, Result};
use crate::spectral::{schatten_norm, CMatrix, JointEigensystem};
use crate::C64;

/// `U diag(f(lambda^(1)), ..., f(lambda^(dim))) U*`.
///
/// When every value is real to `1e-12` relative, the result is returned with
/// exact Hermitian symmetry.
pub fn apply_function(js: &JointEigensystem, f: &dyn RnFunction) -> Result<CMatrix> {
    if f.n() != js.n() {
        return Err(Error::DimensionMismatch(format!(
            "function of {} variables applied to a {}-tuple",
            f.n(),
            js.n()
        )));
    }
    let values = js
        .spectrum()
        .iter()
        .map(|p| f.eval(p))
        .collect::<Result<Vec<C64>>>()?;
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let real = values.iter().all(|v| v.im.abs() <= 1e-12 * (1.0 + scale));
    let u = js.basis();
    let scaled = CMatrix::from_fn(js.dim(), js.dim(), |i, k| {
        u[(i, k)] * if real { C64::new(values[k].re, 0.0) } else { values[k] }
    });
    let out = &scaled * &u.adjoint();
    Ok(if real { out.hermitian_part() } else { out })
}

/// `M[k, l] = phi(lambda_A^(k), lambda_B^(l))`.
pub fn symbol_matrix(
    phi: &GridFunction,
    js_a: &JointEigensystem,
    js_b: &JointEigensystem,
) -> Result<CMatrix> {
    if phi.n() != js_a.n() || phi.n() != js_b.n() {
        return Err(Error::DimensionMismatch(format!(
            "symbol on R^{n} x R^{n} with tuples of sizes {} and {}",
            js_a.n(),
            js_b.n(),
            n = phi.n()
        )));
    }
    let mut m = CMatrix::zeros(js_a.dim(), js_b.dim());
    for k in 0..js_a.dim() {
        for l in 0..js_b.dim() {
            m[(k, l)] = phi.eval(js_a.point(k), js_b.point(l))?;
        }
    }
    Ok(m)
}

fn check_shapes(js_a: &JointEigensystem, js_b: &JointEigensystem, t: &CMatrix) -> Result<()> {
    if t.rows() != js_a.dim() || t.cols() != js_b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "T is {}x{} but the spectral measures have sizes {} and {}",
            t.rows(),
            t.cols(),
            js_a.dim(),
            js_b.dim()
        )));
    }
    Ok(())
}

/// Double operator integral with a precomputed symbol matrix:
/// `U_A (M o (U_A* T U_B)) U_B*`.
pub fn doi_apply_symbol(
    m: &CMatrix,
    js_a: &JointEigensystem,
    js_b: &JointEigensystem,
    t: &CMatrix,
) -> Result<CMatrix> {
    check_shapes(js_a, js_b, t)?;
    if let Some(&c) = m.as_slice().first() {
        if m.as_slice().iter().all(|&v| v == c) {
            // Constant symbols act as scalars; skip the basis round trip.
            return Ok(if c == C64::new(1.0, 0.0) { t.clone() } else { t.scale(c) });
        }
    }
    let inner = &(&js_a.basis().adjoint() * t) * js_b.basis();
    let weighted = m.hadamard(&inner)?;
    Ok(&(js_a.basis() * &weighted) * &js_b.basis().adjoint())
}

/// `int int phi(x, y) dE_A(x) T dE_B(y)` as a Hadamard product in the two
/// joint eigenbases.
pub fn doi_apply(
    phi: &GridFunction,
    js_a: &JointEigensystem,
    js_b: &JointEigensystem,
    t: &CMatrix,
) -> Result<CMatrix> {
    check_shapes(js_a, js_b, t)?;
    let m = symbol_matrix(phi, js_a, js_b)?;
    doi_apply_symbol(&m, js_a, js_b, t)
}

/// Reference double sum `sum_{k,l} phi_kl P_k T Q_l` over the rank-one
/// spectral projections. Quartic cost; meant as an oracle.
pub fn doi_brute(
    phi: &GridFunction,
    js_a: &JointEigensystem,
    js_b: &JointEigensystem,
    t: &CMatrix,
) -> Result<CMatrix> {
    check_shapes(js_a, js_b, t)?;
    let projector = |js: &JointEigensystem, k: usize| {
        let u = js.basis().col(k);
        CMatrix::from_fn(js.dim(), js.dim(), |i, j| u[i] * u[j].conj())
    };
    let q: Vec<CMatrix> = (0..js_b.dim()).map(|l| projector(js_b, l)).collect();
    let mut out = CMatrix::zeros(t.rows(), t.cols());
    for k in 0..js_a.dim() {
        let pt = &projector(js_a, k) * t;
        for (l, ql) in q.iter().enumerate() {
            let w = phi.eval(js_a.point(k), js_b.point(l))?;
            out = &out + &(&pt * ql).scale(w);
        }
    }
    Ok(out)
}

/// Both sides of the Hilbert-Schmidt bound
/// `|DOI(phi) T|_S2 <= sup |phi| |T|_S2`, the sup taken over the spectrum grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S2Check {
    pub lhs: f64,
    pub rhs: f64,
}

impl S2Check {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-10
    }
}

pub fn doi_s2_bound_check(
    phi: &GridFunction,
    js_a: &JointEigensystem,
    js_b: &JointEigensystem,
    t: &CMatrix,
) -> Result<S2Check> {
    let m = symbol_matrix(phi, js_a, js_b)?;
    let out = doi_apply_symbol(&m, js_a, js_b, t)?;
    Ok(S2Check {
        lhs: schatten_norm(&out, 2.0)?,
        rhs: m.max_abs() * schatten_norm(t, 2.0)?,
    })
}
