//! Graph vertex sampling and reconstruction in arbitrary Hilbert spaces of graph signals.
//!
//! Signals live in a space equipped with a diagonal inner product `Q`; smoothness is
//! measured by a variation matrix `M` (the combinatorial Laplacian in practice). The
//! crate provides the `(M, Q)` Fourier basis, spectral-proxy sampling set selection,
//! closed-form and POCS reconstruction, and Monte-Carlo experiments on random
//! geometric graphs.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod reconstruction;
pub mod sampling;
pub mod spectral;
pub mod voronoi;

pub use error::{Error, Result};
pub use graph::{
    combinatorial_laplacian, degree_matrix, q_inner, q_norm, Graph, GraphFile, InnerProduct,
    InnerProductFile, InnerProductKind, VariationMatrix, VertexSet,
};
pub use sampling::{
    a_opt_metric, build_hk, cutoff, e_opt_metric, greedy_select, spectral_proxy, CutoffEstimate,
    ProxyOperator, ProxyOrder, SamplingResult,
};
pub use spectral::SpectralBasis;
