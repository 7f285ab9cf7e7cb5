//! Exact rational matrices and the subspace lattice (sum, intersection,
//! form-orthogonal complement) that everything else is built on.

mod mat;
mod rat;
mod subspace;

pub use mat::Mat;
pub use rat::{format_rat, parse_rat, pow_i, rat, rat_frac, sqrt_exact, Rat};
pub use subspace::Subspace;
