//! Exact-arithmetic engine for Lagrangian splittings of `g ⊕ g` and the
//! rank theory of the Poisson structures they induce on spaces of the form
//! `D/Q` and on the variety of Lagrangian subalgebras.
//!
//! Everything is computed over the rationals: subspaces are kept in reduced
//! row echelon form, brackets come from exact structure-constant tables, and
//! every rank or corank claim is a dimension equality that either holds on
//! the nose or fails loudly.

pub mod error;
pub mod exactlin;
pub mod liealg;
pub mod weyl;
pub mod double;
pub mod poisson;
pub mod rankformula;
pub mod sample;
pub mod suite;

pub use error::Error;
pub use exactlin::{Mat, Rat, Subspace};
pub use liealg::{LieAlgebra, RootDatum};
pub use weyl::{GroupElement, WeylGroup};
pub use double::{Double, GbdQuad, GbdSystem, GbdTriple, LagrangianSubalgebra, ParabolicData, Splitting, Variant};
pub use poisson::{Bivector, PointSpec, RankReport, Trivector};
