//! Sampling set selection with spectral proxies, plus E- and A-optimal design metrics.
//!
//! The `k`-th spectral proxy of a signal is `(||Z^k x||_Q / ||x||_Q)^{1/k}` with
//! `Z = Q^{-1} M`. Its minimum over signals vanishing on a set `S` estimates the cutoff
//! frequency of `S` and equals `σ_min(H_k(S^c))^{1/k}` where
//! `H_k(S^c) = [Q^{1/2} Z^k]_{V,S^c} Q_{S^c}^{-1/2}`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{InnerProduct, VariationMatrix, VertexSet};
use crate::spectral::{sorted_symmetric_eigen, SpectralBasis};

/// Relative gap under which two candidate scores `|phi_i|` count as tied.
pub const TIE_RTOL: f64 = 1e-4;

/// Values of σ_min below this are reported as rank deficient.
pub const RANK_EPS: f64 = 1e-12;

/// Order `k >= 1` of the spectral proxy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProxyOrder(u32);

impl ProxyOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("proxy order must be at least 1".into()));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for ProxyOrder {
    fn default() -> Self {
        Self(3)
    }
}

/// Cutoff frequency of a sampling set and the signal attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffEstimate {
    pub omega: f64,
    /// Unit l2-norm signal, zero on the sampling set.
    pub phi: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingResult {
    /// Vertices in selection order.
    pub order: Vec<usize>,
    /// Cutoff estimate of the set after each addition.
    pub cutoffs: Vec<f64>,
}

impl SamplingResult {
    /// The first `m` selected vertices as a set.
    pub fn prefix(&self, n: usize, m: usize) -> Result<VertexSet> {
        VertexSet::new(n, self.order[..m.min(self.order.len())].to_vec())
    }
}

fn apply_z(m: &VariationMatrix, q: &InnerProduct, z: &DVector<f64>) -> DVector<f64> {
    q.solve(&(m.matrix() * z))
}

fn check_dims(m: &VariationMatrix, q: &InnerProduct) -> Result<()> {
    q.check_len(m.n())
}

pub fn spectral_proxy(m: &VariationMatrix, q: &InnerProduct, k: ProxyOrder, x: &DVector<f64>) -> Result<f64> {
    check_dims(m, q)?;
    q.check_len(x.len())?;
    let denom = q.norm_unchecked(x);
    if denom == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let mut z = x.clone();
    for _ in 0..k.get() {
        z = apply_z(m, q, &z);
    }
    Ok((q.norm_unchecked(&z) / denom).powf(1.0 / f64::from(k.get())))
}

/// `H_k(S^c)`: column `j` is `Q^{1/2} Z^k e_{s_j} / sqrt(q_{s_j})`.
pub fn build_hk(
    m: &VariationMatrix,
    q: &InnerProduct,
    k: ProxyOrder,
    complement: &VertexSet,
) -> Result<DMatrix<f64>> {
    check_dims(m, q)?;
    q.check_len(complement.universe())?;
    if complement.is_empty() {
        return Err(Error::EmptyComplement);
    }
    let n = m.n();
    let sqrt_q = q.sqrt_diagonal();
    let mut h = DMatrix::zeros(n, complement.len());
    for (col, s) in complement.iter().enumerate() {
        let mut z = DVector::zeros(n);
        z[s] = 1.0 / sqrt_q[s];
        for _ in 0..k.get() {
            z = apply_z(m, q, &z);
        }
        h.set_column(col, &z.component_mul(&sqrt_q));
    }
    Ok(h)
}

/// Precomputed `H_k(V)^T H_k(V)`. The Gram of any `H_k(S^c)` is its principal
/// submatrix on `S^c`, so one product serves a whole greedy run.
#[derive(Debug, Clone)]
pub struct ProxyOperator {
    q: InnerProduct,
    k: ProxyOrder,
    gram: DMatrix<f64>,
}

impl ProxyOperator {
    pub fn new(m: &VariationMatrix, q: &InnerProduct, k: ProxyOrder) -> Result<Self> {
        let h = build_hk(m, q, k, &VertexSet::full(m.n()))?;
        let gram = h.tr_mul(&h);
        Ok(Self { q: q.clone(), k, gram })
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }

    pub fn cutoff(&self, s: &VertexSet) -> Result<CutoffEstimate> {
        self.q.check_len(s.universe())?;
        let sc = s.complement();
        if sc.is_empty() {
            return Err(Error::EmptyComplement);
        }
        let idx = sc.indices();
        let p = idx.len();
        let mut g = DMatrix::from_fn(p, p, |i, j| self.gram[(idx[i], idx[j])]);
        for i in 0..p {
            for j in 0..i {
                let v = 0.5 * (g[(i, j)] + g[(j, i)]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        let (values, vectors) = sorted_symmetric_eigen(g)?;
        let sigma_sq = values[0].max(0.0);
        let omega = sigma_sq.powf(0.5 / f64::from(self.k.get()));

        let mut phi = DVector::zeros(self.n());
        for (j, &v) in idx.iter().enumerate() {
            phi[v] = vectors[(j, 0)] / self.q.diagonal()[v].sqrt();
        }
        let norm = phi.norm();
        phi /= norm;
        Ok(CutoffEstimate { omega, phi })
    }
}

/// `Ω_k(S)` with its minimizing signal.
pub fn cutoff(m: &VariationMatrix, q: &InnerProduct, k: ProxyOrder, s: &VertexSet) -> Result<CutoffEstimate> {
    check_dims(m, q)?;
    if s.len() >= m.n() {
        return Err(Error::EmptyComplement);
    }
    ProxyOperator::new(m, q, k)?.cutoff(s)
}

/// Greedy selection of `target` vertices: each step adds the vertex where the current
/// minimizing signal has the largest magnitude. When several vertices are tied within
/// `TIE_RTOL` (as happens on the empty set, where the minimizer of a Laplacian is
/// constant) the tied candidates are scored by the cutoff they would produce and the
/// lowest index wins among equal scores.
pub fn greedy_select(
    m: &VariationMatrix,
    q: &InnerProduct,
    k: ProxyOrder,
    target: usize,
) -> Result<SamplingResult> {
    check_dims(m, q)?;
    let n = m.n();
    if target == 0 || target >= n {
        return Err(Error::InvalidTarget { target, n });
    }
    let op = ProxyOperator::new(m, q, k)?;
    let mut selected: Vec<usize> = Vec::with_capacity(target);
    let mut cutoffs = Vec::with_capacity(target);
    let mut set = VertexSet::empty(n);
    let mut current = op.cutoff(&set)?;

    while selected.len() < target {
        let best = set.complement().iter().map(|i| current.phi[i].abs()).fold(0.0, f64::max);
        let tied: Vec<usize> =
            set.complement().iter().filter(|&i| current.phi[i].abs() >= best * (1.0 - TIE_RTOL)).collect();

        let (vertex, next) = if tied.len() == 1 {
            let v = tied[0];
            let next_set = with_vertex(&set, v)?;
            let next = if next_set.len() < n { Some(op.cutoff(&next_set)?) } else { None };
            (v, next)
        } else {
            let mut choice: Option<(usize, CutoffEstimate)> = None;
            for &v in &tied {
                let est = op.cutoff(&with_vertex(&set, v)?)?;
                if choice.as_ref().map_or(true, |(_, c)| est.omega > c.omega) {
                    choice = Some((v, est));
                }
            }
            let (v, est) = choice.expect("at least one tied candidate");
            (v, Some(est))
        };

        selected.push(vertex);
        set = with_vertex(&set, vertex)?;
        let next = next.expect("target < n keeps the complement nonempty");
        cutoffs.push(next.omega);
        current = next;
    }
    Ok(SamplingResult { order: selected, cutoffs })
}

fn with_vertex(s: &VertexSet, v: usize) -> Result<VertexSet> {
    let mut idx = s.indices().to_vec();
    idx.push(v);
    VertexSet::new(s.universe(), idx)
}

/// `Q_S^{1/2} U_{S,R}` with `R` the first `r` modes.
pub(crate) fn weighted_sampled_band(basis: &SpectralBasis, s: &VertexSet, r: usize) -> DMatrix<f64> {
    let mut a = basis.sampled_band(s.indices(), r);
    let q = basis.inner_product().diagonal();
    for (row, v) in s.iter().enumerate() {
        let w = q[v].sqrt();
        a.row_mut(row).scale_mut(w);
    }
    a
}

fn check_band(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<()> {
    basis.inner_product().check_len(s.universe())?;
    if r == 0 || r > basis.n() {
        return Err(Error::InvalidParameter(format!("band size {r} out of range")));
    }
    Ok(())
}

/// Smallest singular value of `Q_S^{1/2} U_{S,R}` (large is good: E-optimal design).
pub fn e_opt_metric(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<f64> {
    check_band(basis, s, r)?;
    if s.len() < r {
        return Err(Error::RankDeficient { sigma_min: 0.0 });
    }
    let a = weighted_sampled_band(basis, s, r);
    let sigma_min = a.singular_values().min();
    if !sigma_min.is_finite() {
        return Err(Error::NotFinite);
    }
    if sigma_min < RANK_EPS {
        return Err(Error::RankDeficient { sigma_min });
    }
    Ok(sigma_min)
}

/// `trace((U_{S,R}^T Q_S U_{S,R})^{-1})` (small is good: A-optimal design).
pub fn a_opt_metric(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<f64> {
    check_band(basis, s, r)?;
    let inv = inverse_gram(basis, s, r)?;
    Ok(inv.trace())
}

/// Inverse of `U_{S,R}^T Q_S U_{S,R}`, failing when the Gram is numerically singular.
pub(crate) fn inverse_gram(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<DMatrix<f64>> {
    if s.len() < r {
        return Err(Error::SingularGram { sigma_min: 0.0 });
    }
    let a = weighted_sampled_band(basis, s, r);
    let gram = a.tr_mul(&a);
    let singular =
        || Error::SingularGram { sigma_min: gram.clone().symmetric_eigenvalues().min().max(0.0).sqrt() };
    let chol = gram.clone().cholesky().ok_or_else(singular)?;
    let diag_min = chol.l_dirty().diagonal().min();
    let diag_max = chol.l_dirty().diagonal().max();
    if !(diag_min > 0.0) || diag_min < 1e-7 * diag_max {
        return Err(singular());
    }
    Ok(chol.inverse())
}
