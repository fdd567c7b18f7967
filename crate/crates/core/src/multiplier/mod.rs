//! The cutoff `omega`, the kernels `Xi_j`, the pieces `Psi_j`, multiplier
//! bounds for smooth functions on cubes, and certified `gamma_2` norms.

mod bounds;
mod cutoff;
mod gamma2;
mod psi;

pub use bounds::{coefficient_sum_bound, lemma_fou_bound, FouBound, FouOptions, ProductCube};
pub use cutoff::{cutoff_omega, phi_total, xi, xi_extended};
pub use gamma2::{
    gamma2_lower_probe, gamma2_norm, gamma2_norm_with_cap, multiplier_norm_on_grid,
    sample_symbol, MultiplierCertificate, DEFAULT_TOL, MAX_ITERATIONS,
};
pub use psi::{IdentitySweep, PsiCell, PsiConstruction};
