use thiserror::Error;

/// Errors raised by the lattice, coloring, tracing and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("({0}, {1}, {2}) is not a lattice cell (coordinates must be all even or all odd)")]
    OffLattice(i64, i64, i64),

    #[error("coordinate {0} is outside the supported range |c| < 2^60")]
    CoordinateRange(i64),

    #[error("cells do not form a {0}-clique")]
    NotAClique(usize),

    #[error("region is unbounded")]
    UnboundedRegion,

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("cell {0:?} lies outside the support of the coloring")]
    OutsideSupport(Vec<i64>),

    #[error("invalid tracer state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circulation {0} around the loop is not divisible by 3")]
    NonIntegerFlux(i64),

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;
