//! JSON interchange for matrices and commuting tuples.
//!
//! A matrix is `{"dim": d, "entries": [[re, im], ...]}` with `d*d` entries
//! in row-major order. A tuple adds `"n"` and concatenates the `n` matrices.

use serde::{Deserialize, Serialize};

use super::{CMatrix, CommutingTuple, HermitianMatrix};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "only square matrices are serialised, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(MatrixJson {
            dim: m.rows(),
            n: None,
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        })
    }

    pub fn from_tuple(t: &CommutingTuple) -> Self {
        let entries = t
            .matrices()
            .iter()
            .flat_map(|m| m.as_matrix().as_slice().iter().map(|z| [z.re, z.im]))
            .collect();
        MatrixJson {
            dim: t.dim(),
            n: Some(t.n()),
            entries,
        }
    }

    /// The stored matrices (one unless `n` is set).
    pub fn matrices(&self) -> Result<Vec<CMatrix>> {
        let count = self.n.unwrap_or(1);
        let block = self.dim * self.dim;
        if self.dim == 0 || count == 0 || self.entries.len() != count * block {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for n={count}, dim={}, found {}",
                count * block,
                self.dim,
                self.entries.len()
            )));
        }
        self.entries
            .chunks(block)
            .map(|c| {
                CMatrix::from_vec(
                    self.dim,
                    self.dim,
                    c.iter().map(|e| C64::new(e[0], e[1])).collect(),
                )
            })
            .collect()
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        let mut ms = self.matrices()?;
        if ms.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "expected a single matrix, found {}",
                ms.len()
            )));
        }
        Ok(ms.remove(0))
    }

    pub fn tuple(&self, commutation_tol: f64) -> Result<CommutingTuple> {
        let hs = self
            .matrices()?
            .into_iter()
            .map(HermitianMatrix::new)
            .collect::<Result<Vec<_>>>()?;
        CommutingTuple::new(hs, commutation_tol)
    }

    pub fn to_string_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_matrix() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64 - 0.5));
        let j = MatrixJson::from_matrix(&m).unwrap();
        let back = MatrixJson::parse(&j.to_string_pretty().unwrap()).unwrap();
        assert_eq!(back.matrix().unwrap(), m);
    }

    #[test]
    fn roundtrip_tuple() {
        let t = CommutingTuple::with_default_tol(vec![
            HermitianMatrix::new(CMatrix::from_diag(&[1.0, 2.0])).unwrap(),
            HermitianMatrix::new(CMatrix::from_diag(&[0.0, -1.0])).unwrap(),
        ])
        .unwrap();
        let j = MatrixJson::from_tuple(&t);
        let back = j.tuple(1e-8).unwrap();
        assert_eq!(back.n(), 2);
        assert_eq!(back.get(1).as_matrix(), t.get(1).as_matrix());
    }

    #[test]
    fn wrong_length() {
        let j = MatrixJson {
            dim: 2,
            n: None,
            entries: vec![[0.0, 0.0]; 3],
        };
        assert!(j.matrix().is_err());
    }
}
