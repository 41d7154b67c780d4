use thiserror::Error;

/// Errors raised by graph construction, spectral, sampling and reconstruction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),
    #[error("inner product matrix entry {index} is not strictly positive ({value})")]
    NonPositiveInnerProduct { index: usize, value: f64 },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver produced non-finite values")]
    NotFinite,
    #[error("spectral proxy of the zero signal is undefined")]
    ZeroSignal,
    #[error("complement of the sampling set is empty")]
    EmptyComplement,
    #[error("invalid sampling target {target} for a graph of {n} vertices")]
    InvalidTarget { target: usize, n: usize },
    #[error("sampled band is rank deficient (sigma_min = {sigma_min:e})")]
    RankDeficient { sigma_min: f64 },
    #[error("reconstruction Gram matrix is singular (sigma_min = {sigma_min:e})")]
    SingularGram { sigma_min: f64 },
    #[error("Voronoi cell of site {0} is degenerate")]
    DegenerateCell(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
