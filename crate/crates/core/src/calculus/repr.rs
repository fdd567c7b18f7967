use super::bandlimited::BandlimitedFunction;
use super::doi::{apply_function, doi_apply};
use crate::error::{Error, Result};
use crate::multiplier::PsiConstruction;
use crate::spectral::{joint_diagonalize_default, CMatrix, CommutingTuple};

/// Both sides of
/// `f(A) - f(B) = sum_j int int Psi_j(x, y) dE_A(x) (A_j - B_j) dE_B(y)`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    /// `|lhs - rhs|_op`.
    pub residual: f64,
}

impl Representation {
    pub fn tolerance(&self) -> f64 {
        1e-8 * (1.0 + self.lhs.op_norm())
    }

    pub fn within_contract(&self) -> bool {
        self.residual <= self.tolerance()
    }

    pub fn check(self) -> Result<Self> {
        if self.within_contract() {
            Ok(self)
        } else {
            Err(Error::ContractViolation(format!(
                "representation residual {:e} exceeds {:e}",
                self.residual,
                self.tolerance()
            )))
        }
    }
}

/// Computes `f(A) - f(B)` directly and through the `Psi_j` pieces built on
/// the dyadic lattice rescaled to the bandwidth of `f`.
pub fn perturbation_representation(
    f: &BandlimitedFunction,
    ta: &CommutingTuple,
    tb: &CommutingTuple,
) -> Result<Representation> {
    if ta.n() != tb.n() || ta.dim() != tb.dim() || ta.n() != f.n() {
        return Err(Error::DimensionMismatch(format!(
            "f on R^{}, tuples (n={}, dim={}) and (n={}, dim={})",
            f.n(),
            ta.n(),
            ta.dim(),
            tb.n(),
            tb.dim()
        )));
    }
    let js_a = joint_diagonalize_default(ta)?;
    let js_b = joint_diagonalize_default(tb)?;
    let lhs = &apply_function(&js_a, f)? - &apply_function(&js_b, f)?;
    let construction = PsiConstruction::for_bandwidth(f);
    let mut rhs = CMatrix::zeros(ta.dim(), ta.dim());
    for j in 0..f.n() {
        let diff = ta.get(j).as_matrix() - tb.get(j).as_matrix();
        let piece = doi_apply(&construction.kernel(j), &js_a, &js_b, &diff)?;
        rhs = &rhs + &piece;
    }
    let residual = (&lhs - &rhs).op_norm();
    Ok(Representation { lhs, rhs, residual })
}
