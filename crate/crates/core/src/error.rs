use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not full-dimensional: affine rank {rank} in dimension {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("hyperplanes not parallel")]
    NotParallel,

    #[error("point not in polytope")]
    PointOutside,

    #[error("the point set does not generate the integer lattice")]
    NotGenerating,

    #[error("the point set must contain the origin")]
    MissingOrigin,

    #[error("zonotope too large: {generators} generators exceeds budget {budget}")]
    ZonotopeTooLarge { generators: usize, budget: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("polytope has a non-lattice vertex")]
    NonLatticeVertex,

    #[error("region is unbounded")]
    Unbounded,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
