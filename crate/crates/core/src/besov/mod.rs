//! Littlewood-Paley pieces, Besov norms `B^s_{inf,1}`, Hoelder seminorms,
//! moduli of continuity and band-limited projection of grid data.

mod holder;
mod lp;
mod modulus;
mod project;

pub use holder::holder_seminorm;
pub use lp::{
    besov_norm, low_pass, lp_decompose, lp_weight, sup_norm_estimate, LittlewoodPaleyPieces,
    SupOptions,
};
pub use modulus::{modulus_star, ModulusOfContinuity};
pub use project::{bandlimit_project, UniformGrid};
