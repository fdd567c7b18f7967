use super::{eigh, CMatrix};
use crate::error::{Error, Result};

/// Relative symmetry tolerance accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A square complex matrix stored with exact Hermitian symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `|m_ij - conj(m_ji)| <= 1e-12 * max|m_ij|` and stores
    /// its Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square and nonempty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let tolerance = HERMITIAN_TOL * m.max_abs();
        let asymmetry = m.hermitian_defect();
        if asymmetry > tolerance {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        Ok(HermitianMatrix(m.hermitian_part()))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Operator norm as the largest absolute eigenvalue.
    pub fn op_norm(&self) -> f64 {
        let e = eigh(self);
        e.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl AsRef<CMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}
