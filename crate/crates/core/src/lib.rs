//! Numerical laboratory for functions of perturbed tuples of commuting
//! self-adjoint matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: dense complex Hermitian linear algebra (cyclic Jacobi,
//!   joint diagonalisation, singular values, Schatten norms).
//! * [`calculus`]: multivariate functional calculus, divided differences and
//!   double operator integrals realised as Hadamard products in joint
//!   eigenbases.
//! * [`dyadic`]: the dyadic lattice on `R^n x R^n` and its maximal admissible
//!   (Whitney-type) cubes relative to the diagonal.
//! * [`multiplier`]: the cutoff `omega`, the kernels `Xi_j`, the pieces
//!   `Psi_j` with `f(x) - f(y) = sum_j (x_j - y_j) Psi_j(x, y)`, multiplier
//!   bounds and certified `gamma_2` norms.
//! * [`besov`]: Littlewood-Paley pieces, Besov norms, Hoelder seminorms and
//!   moduli of continuity.
//! * [`experiment`]: seeded generators, one experiment per perturbation
//!   inequality, and report emission.

pub mod besov;
pub mod calculus;
pub mod dyadic;
pub mod error;
pub mod experiment;
pub mod fft;
pub mod multiplier;
pub mod quad;
pub mod smooth;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
