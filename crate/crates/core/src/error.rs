use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inner lattice is not contained in the outer lattice")]
    NotNested,
    #[error("cone is not strictly convex: {0}")]
    NotStrictlyConvex(String),
    #[error("generators do not lie in a strictly convex cone; split off the units first")]
    NoPositiveFunctional,
    #[error("lattice map is not injective")]
    NotInjective,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid stacky fan: {0}")]
    InvalidStackyFan(String),
    #[error("invalid cone complex: {0}")]
    InvalidComplex(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A postcondition guaranteed by the theory did not hold; indicates a bug.
    #[error("construction check failed: {0}")]
    Validation(String),
}
