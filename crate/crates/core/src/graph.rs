//! Graphs, variation operators and diagonal inner products on graph signals.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected weighted graph stored as a dense symmetric weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: DMatrix<f64>,
}

/// On-disk form of a graph: upper-triangular edge list `[i, j, w]` with `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Validates symmetry, nonnegativity and a zero diagonal.
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        if weights.ncols() != n {
            return Err(Error::InvalidGraph(format!("weight matrix is {}x{}", n, weights.ncols())));
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!("self loop on vertex {i}")));
            }
            for j in 0..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidGraph(format!("weight ({i}, {j}) = {w}")));
                }
                if w != weights[(j, i)] {
                    return Err(Error::InvalidGraph(format!("asymmetric weight at ({i}, {j})")));
                }
            }
        }
        Ok(Self { weights })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = DMatrix::zeros(n, n);
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self loop on vertex {i}")));
            }
            if weights[(i, j)] != 0.0 {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
        Self::new(weights)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.weights.row_iter().map(|r| r.sum()))
    }

    pub fn to_file(&self) -> GraphFile {
        let n = self.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weights[(i, j)];
                if w != 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
        GraphFile { n, edges }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        Self::from_edges(file.n, &file.edges)
    }
}

/// Hermitian PSD matrix `M` defining the variation `x^T M x` of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationMatrix(DMatrix<f64>);

impl VariationMatrix {
    /// Wraps a symmetric matrix. Positive semi-definiteness is the caller's responsibility.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
        }
        let scale = m.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "variation matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.0 * x))
    }
}

/// Combinatorial Laplacian `L = diag(W 1) - W`.
pub fn combinatorial_laplacian(g: &Graph) -> VariationMatrix {
    let mut l = -g.weights();
    for (i, d) in g.degrees().iter().enumerate() {
        l[(i, i)] = *d;
    }
    VariationMatrix(l)
}

/// Which construction produced an inner product matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerProductKind {
    Identity,
    Degree,
    VoronoiArea,
    CustomDiagonal,
}

/// Diagonal positive definite inner product matrix `Q` with `<x, y>_Q = y^T Q x`.
///
/// Only diagonal matrices are represented. A full Hermitian `Q` would replace the
/// elementwise square roots and divisions below with a Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    kind: InnerProductKind,
    diag: DVector<f64>,
}

impl InnerProduct {
    pub fn identity(n: usize) -> Self {
        Self { kind: InnerProductKind::Identity, diag: DVector::from_element(n, 1.0) }
    }

    pub fn from_diagonal(kind: InnerProductKind, diag: DVector<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some((index, &value)) = diag.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveInnerProduct { index, value });
        }
        Ok(Self { kind, diag })
    }

    pub fn kind(&self) -> InnerProductKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &DVector<f64> {
        &self.diag
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diag)
    }

    pub fn sqrt_diagonal(&self) -> DVector<f64> {
        self.diag.map(f64::sqrt)
    }

    /// Principal submatrix `Q_S`.
    pub fn restrict(&self, s: &VertexSet) -> Result<Self> {
        self.check_len(s.universe())?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let diag = DVector::from_iterator(s.len(), s.iter().map(|i| self.diag[i]));
        Ok(Self { kind: self.kind, diag })
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        Ok(self.inner_unchecked(x, y))
    }

    pub fn norm(&self, x: &DVector<f64>) -> Result<f64> {
        self.inner(x, x).map(f64::sqrt)
    }

    pub(crate) fn inner_unchecked(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.diag.iter().zip(x.iter().zip(y.iter())).map(|(q, (a, b))| q * a * b).sum()
    }

    pub(crate) fn norm_unchecked(&self, x: &DVector<f64>) -> f64 {
        self.inner_unchecked(x, x).sqrt()
    }

    /// `Q^{-1} v`
    pub(crate) fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        v.component_div(&self.diag)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: len });
        }
        Ok(())
    }

    pub fn to_file(&self) -> InnerProductFile {
        InnerProductFile { kind: self.kind, diagonal: self.diag.iter().copied().collect() }
    }

    pub fn from_file(file: &InnerProductFile) -> Result<Self> {
        Self::from_diagonal(file.kind, DVector::from_vec(file.diagonal.clone()))
    }
}

/// On-disk form of an inner product: its kind and diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerProductFile {
    pub kind: InnerProductKind,
    pub diagonal: Vec<f64>,
}

/// Degree matrix `D = diag(W 1)` as an inner product.
pub fn degree_matrix(g: &Graph) -> Result<InnerProduct> {
    let d = g.degrees();
    if let Some(i) = d.iter().position(|&v| v <= 0.0) {
        return Err(Error::ZeroDegree(i));
    }
    InnerProduct::from_diagonal(InnerProductKind::Degree, d)
}

/// `<x, y>_Q = y^T Q x`
pub fn q_inner(x: &DVector<f64>, y: &DVector<f64>, q: &InnerProduct) -> Result<f64> {
    q.inner(x, y)
}

pub fn q_norm(x: &DVector<f64>, q: &InnerProduct) -> Result<f64> {
    q.norm(x)
}

/// Strictly increasing set of vertex indices drawn from `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    indices: Vec<usize>,
}

impl VertexSet {
    /// Sorts `indices`; rejects duplicates and out-of-range ids.
    pub fn new(universe: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidVertexSet(format!("duplicate vertex {}", w[0])));
        }
        if let Some(&last) = indices.last() {
            if last >= universe {
                return Err(Error::InvalidVertexSet(format!(
                    "vertex {last} out of range for {universe} vertices"
                )));
            }
        }
        Ok(Self { universe, indices })
    }

    pub fn empty(universe: usize) -> Self {
        Self { universe, indices: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        Self { universe, indices: (0..universe).collect() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        let mut member = vec![false; self.universe];
        for &i in &self.indices {
            member[i] = true;
        }
        let indices = (0..self.universe).filter(|&i| !member[i]).collect();
        Self { universe: self.universe, indices }
    }

    /// Entries of `x` at the set's vertices, in index order.
    pub fn gather(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.iter().map(|i| x[i]))
    }

    /// Full-length signal holding `values` on the set and zero elsewhere.
    pub fn scatter(&self, values: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.universe);
        for (k, i) in self.iter().enumerate() {
            out[i] = values[k];
        }
        out
    }
}
