//! Dense complex linear algebra: Hermitian eigensolver, joint
//! diagonalisation of commuting tuples, singular values and Schatten norms.

mod eigen;
mod hermitian;
mod joint;
mod json;
mod matrix;
mod norms;

pub use eigen::{eigh, EigenDecomposition};
pub use hermitian::{HermitianMatrix, HERMITIAN_TOL};
pub use joint::{
    commutation_defect, default_cluster_tol, joint_diagonalize, joint_diagonalize_default,
    CommutingTuple, JointEigensystem, DEFAULT_COMMUTATION_TOL,
};
pub use json::MatrixJson;
pub use matrix::CMatrix;
pub use norms::{schatten_norm, singular_values};
