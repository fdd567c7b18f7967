//! Multivariate functional calculus, divided differences and double
//! operator integrals.

mod bandlimited;
mod doi;
mod function;
mod repr;

pub use bandlimited::{phase_quotient, BandlimitedFunction, BandlimitedJson, Term, TermJson};
pub use doi::{
    apply_function, doi_apply, doi_apply_symbol, doi_brute, doi_s2_bound_check, symbol_matrix,
    S2Check,
};
pub use function::{merged_points, FnHandle, GridFunction, RnFunction, DIAG_TOL};
pub use repr::{perturbation_representation, Representation};
