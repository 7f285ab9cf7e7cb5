use thiserror::Error;

/// Errors surfaced by the engine.
///
/// `TheoryViolation` is special: it flags a dimension identity that the
/// theory guarantees and that the implementation found broken. It should
/// never fire on valid input; the CLI maps it to a distinct exit code so
/// CI can tell "formula mismatch" apart from "bad input".
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("bilinear form is not symmetric")]
    NonSymmetricForm,
    #[error("rank must be at least 1")]
    RankOutOfRange,
    #[error("vector of length {0} does not live in ambient of dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("subspace is not closed under the bracket")]
    NotASubalgebra,
    #[error("ad x is not nilpotent")]
    NotNilpotent,
    #[error("torus coordinates must be nonzero")]
    ZeroTorusCoordinate,
    #[error("Weyl group order exceeds the configured bound {0}")]
    WeylBoundExceeded(usize),
    #[error("not a generalized Belavin-Drinfeld triple: {0}")]
    InvalidGbdTriple(String),
    #[error("V is not a Lagrangian subspace of z_S + z_T")]
    InvalidLagrangianV,
    #[error("subspaces do not form a Lagrangian splitting")]
    NotASplitting,
    #[error("subalgebra is not coisotropic")]
    NotCoisotropic,
    #[error("vector does not lie in the requested subspace")]
    NotInSubspace,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("theory violation: {0}")]
    TheoryViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
