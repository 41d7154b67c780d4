//! Reconstruction of bandlimited graph signals from samples.
//!
//! Two routes are provided: the closed-form consistent (least-squares) estimate in the
//! `Q_S` norm, and alternating projections between sample-consistent signals and a
//! Chebyshev approximation of a sigmoid low-pass filter of `Z = Q^{-1} M`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{InnerProduct, VariationMatrix, VertexSet};
use crate::sampling::{e_opt_metric, inverse_gram, weighted_sampled_band};
use crate::spectral::{symmetrized_operator, SpectralBasis};

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub x_hat: DVector<f64>,
    /// Outer iterations; zero for the closed form.
    pub iters: usize,
    /// `max |x̂_S - y_S|`
    pub residual_s: f64,
    /// Relative `Q`-norm change at the last iteration (iterative methods only).
    pub last_change: Option<f64>,
    pub converged: bool,
    /// `||x̂ - x||_Q` once a ground truth is attached.
    pub q_error: Option<f64>,
}

impl ReconstructionReport {
    pub fn with_truth(mut self, truth: &DVector<f64>, q: &InnerProduct) -> Result<Self> {
        self.q_error = Some(q.norm(&(&self.x_hat - truth))?);
        Ok(self)
    }
}

fn check_samples(n: usize, s: &VertexSet, y_s: &DVector<f64>) -> Result<()> {
    if s.universe() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.universe() });
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if y_s.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: y_s.len() });
    }
    Ok(())
}

fn sample_residual(x: &DVector<f64>, s: &VertexSet, y_s: &DVector<f64>) -> f64 {
    s.iter().zip(y_s.iter()).map(|(v, y)| (x[v] - y).abs()).fold(0.0, f64::max)
}

fn check_band(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<()> {
    if s.universe() != basis.n() {
        return Err(Error::DimensionMismatch { expected: basis.n(), found: s.universe() });
    }
    if r == 0 || r > s.len() {
        return Err(Error::InvalidParameter(format!("band of {r} modes needs 1 <= r <= |S| = {}", s.len())));
    }
    Ok(())
}

/// `x̂ = U_{V,R} (U_{S,R}^T Q_S U_{S,R})^{-1} U_{S,R}^T Q_S y_S` with `R` the first `r` modes.
pub fn consistent_reconstruct(
    basis: &SpectralBasis,
    s: &VertexSet,
    r: usize,
    y_s: &DVector<f64>,
) -> Result<ReconstructionReport> {
    check_samples(basis.n(), s, y_s)?;
    check_band(basis, s, r)?;
    let coeffs = least_squares_coeffs(basis, s, r, y_s)?;
    let x_hat = basis.modes().columns(0, r) * coeffs;
    let residual_s = sample_residual(&x_hat, s, y_s);
    Ok(ReconstructionReport {
        x_hat,
        iters: 0,
        residual_s,
        last_change: None,
        converged: true,
        q_error: None,
    })
}

/// Minimizer of `||Q_S^{1/2} (U_{S,R} c - y_S)||` by Householder QR. Solving the normal
/// equations instead would square the condition number.
fn least_squares_coeffs(
    basis: &SpectralBasis,
    s: &VertexSet,
    r: usize,
    y_s: &DVector<f64>,
) -> Result<DVector<f64>> {
    let a = weighted_sampled_band(basis, s, r);
    let singular = || Error::SingularGram { sigma_min: a.singular_values().min() };
    let sqrt_q =
        DVector::from_iterator(s.len(), s.iter().map(|v| basis.inner_product().diagonal()[v].sqrt()));
    let qr = a.clone().qr();
    let rfac = qr.r();
    let diag = rfac.diagonal().abs();
    if !(diag.min() > 0.0) || diag.min() < 1e-7 * diag.max() {
        return Err(singular());
    }
    let qtb = qr.q().tr_mul(&y_s.component_mul(&sqrt_q));
    rfac.solve_upper_triangular(&qtb).ok_or_else(singular)
}

/// Reconstruction error covariance `E = U_{V,R} G^{-1} U_{V,R}^T Q` under `Q_S`-white noise.
pub fn error_covariance(basis: &SpectralBasis, s: &VertexSet, r: usize) -> Result<DMatrix<f64>> {
    check_band(basis, s, r)?;
    let inv = inverse_gram(basis, s, r)?;
    let u_r = basis.modes().columns(0, r);
    let mut e = u_r * inv * u_r.transpose();
    let q = basis.inner_product().diagonal();
    for (j, mut col) in e.column_iter_mut().enumerate() {
        col *= q[j];
    }
    Ok(e)
}

/// Both sides of the model-mismatch bound
/// `||x - x̂||_Q <= ||x_perp||_Q / σ_min(Q_S^{1/2} U_{S,R})` for noiseless samples of `x`.
pub fn verify_error_bound(
    basis: &SpectralBasis,
    s: &VertexSet,
    r: usize,
    x: &DVector<f64>,
) -> Result<(f64, f64)> {
    let q = basis.inner_product();
    q.check_len(x.len())?;
    let report = consistent_reconstruct(basis, s, r, &s.gather(x))?;
    let lhs = q.norm_unchecked(&(x - &report.x_hat));
    let sigma_min = match e_opt_metric(basis, s, r) {
        Ok(v) => v,
        Err(Error::RankDeficient { sigma_min }) => return Err(Error::SingularGram { sigma_min }),
        Err(e) => return Err(e),
    };
    let (_, perp) = basis.bandlimit_split(x, r)?;
    Ok((lhs, q.norm_unchecked(&perp) / sigma_min))
}

/// Sigmoid low-pass response `1 / (1 + exp(alpha (lambda - omega)))`.
pub fn sigmoid_response(lambda: f64, omega: f64, alpha: f64) -> f64 {
    1.0 / (1.0 + (alpha * (lambda - omega)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PocsParams {
    pub omega: f64,
    pub alpha: f64,
    pub cheb_order: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub lambda_max: f64,
}

impl PocsParams {
    /// Defaults: the 0.92 to 0.08 transition of the sigmoid spans a tenth of the spectrum,
    /// order 60, at most 500 iterations, relative tolerance 1e-8.
    pub fn new(omega: f64, lambda_max: f64) -> Self {
        Self {
            omega,
            alpha: default_alpha(lambda_max),
            cheb_order: 60,
            max_iters: 500,
            rel_tol: 1e-8,
            lambda_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_owned()));
        if self.cheb_order < 1 {
            return bad("Chebyshev order must be at least 1");
        }
        if self.max_iters < 1 {
            return bad("max_iters must be at least 1");
        }
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol must be positive");
        }
        if !(self.lambda_max > 0.0 && self.lambda_max.is_finite()) {
            return bad("lambda_max must be positive and finite");
        }
        if !(self.omega >= 0.0 && self.omega <= self.lambda_max) {
            return bad("omega must lie in [0, lambda_max]");
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be positive and finite");
        }
        Ok(())
    }
}

/// Sharpness for which h falls from 0.92 to 0.08 across 10% of `[0, lambda_max]`.
pub fn default_alpha(lambda_max: f64) -> f64 {
    2.0 * 11.5f64.ln() / (0.1 * lambda_max)
}

/// Safe upper bound on the spectrum of `Z`: 100 power iterations on
/// `Q^{-1/2} M Q^{-1/2}`, inflated by 1%.
pub fn estimate_lambda_max(m: &VariationMatrix, q: &InnerProduct) -> Result<f64> {
    q.check_len(m.n())?;
    let s = symmetrized_operator(m, q);
    let n = m.n();
    // deterministic start with no symmetry to annihilate the top mode by accident
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64 + 1.0).sqrt().fract());
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..100 {
        let w = &s * &v;
        estimate = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            break;
        }
        v = w / norm;
    }
    if !estimate.is_finite() {
        return Err(Error::NotFinite);
    }
    Ok(estimate.max(f64::MIN_POSITIVE) * 1.01)
}

/// Truncated Chebyshev series `Σ_j a_j T_j(2λ/λ_max - 1)` on `[0, λ_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    pub coeffs: Vec<f64>,
    pub lambda_max: f64,
    /// Max deviation from the fitted function on a 1,000-point uniform grid.
    pub max_grid_error: f64,
}

const GRID_POINTS: usize = 1000;

impl ChebSeries {
    /// Projects `f` on the first `order + 1` Chebyshev polynomials with Gauss–Chebyshev
    /// quadrature (discrete cosine transform of `f` at the Chebyshev nodes).
    pub fn fit(f: impl Fn(f64) -> f64, order: usize, lambda_max: f64) -> Self {
        let nodes = (4 * (order + 1)).max(1024);
        let samples: Vec<(f64, f64)> = (0..nodes)
            .map(|i| {
                let theta = std::f64::consts::PI * (i as f64 + 0.5) / nodes as f64;
                let lambda = 0.5 * lambda_max * (theta.cos() + 1.0);
                (theta, f(lambda))
            })
            .collect();
        let coeffs = (0..=order)
            .map(|j| {
                let sum: f64 = samples.iter().map(|(t, v)| v * (j as f64 * t).cos()).sum();
                let scale = if j == 0 { 1.0 } else { 2.0 };
                scale * sum / nodes as f64
            })
            .collect();
        let mut series = Self { coeffs, lambda_max, max_grid_error: 0.0 };
        series.max_grid_error = (0..GRID_POINTS)
            .map(|i| {
                let lambda = lambda_max * i as f64 / (GRID_POINTS - 1) as f64;
                (series.eval(lambda) - f(lambda)).abs()
            })
            .fold(0.0, f64::max);
        series
    }

    pub fn from_coeffs(coeffs: Vec<f64>, lambda_max: f64) -> Self {
        Self { coeffs, lambda_max, max_grid_error: f64::NAN }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, lambda: f64) -> f64 {
        let t = 2.0 * lambda / self.lambda_max - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs.first().copied().unwrap_or(0.0) + t * b1 - b2
    }
}

/// Chebyshev series of the sigmoid low-pass response for `params`.
pub fn cheb_coeffs(params: &PocsParams) -> ChebSeries {
    let PocsParams { omega, alpha, cheb_order, lambda_max, .. } = *params;
    ChebSeries::fit(|l| sigmoid_response(l, omega, alpha), cheb_order, lambda_max)
}

/// `p(Z) x` by the three-term recurrence, using only products `z -> Q^{-1} M z`.
pub fn apply_poly_filter(
    m: &VariationMatrix,
    q: &InnerProduct,
    series: &ChebSeries,
    x: &DVector<f64>,
) -> Result<DVector<f64>> {
    q.check_len(m.n())?;
    q.check_len(x.len())?;
    let coeffs = &series.coeffs;
    if coeffs.is_empty() {
        return Ok(DVector::zeros(x.len()));
    }
    let scale = 2.0 / series.lambda_max;
    // shifted operator Y = (2 / λ_max) Z - I maps the spectrum into [-1, 1]
    let shifted = |v: &DVector<f64>| q.solve(&(m.matrix() * v)) * scale - v;

    let mut out = x * coeffs[0];
    if coeffs.len() == 1 {
        return Ok(out);
    }
    let mut prev = x.clone();
    let mut cur = shifted(x);
    out.axpy(coeffs[1], &cur, 1.0);
    for &c in &coeffs[2..] {
        let next = shifted(&cur) * 2.0 - &prev;
        out.axpy(c, &next, 1.0);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Alternating projections: filter with the polynomial low-pass, then re-impose the
/// samples. Starts from `x0` or the zero-filled samples; stops when the relative
/// `Q`-norm change falls to `rel_tol` or after `max_iters` sweeps.
pub fn pocs_reconstruct(
    m: &VariationMatrix,
    q: &InnerProduct,
    s: &VertexSet,
    y_s: &DVector<f64>,
    params: &PocsParams,
    x0: Option<&DVector<f64>>,
) -> Result<ReconstructionReport> {
    q.check_len(m.n())?;
    check_samples(m.n(), s, y_s)?;
    params.validate()?;
    let series = cheb_coeffs(params);
    pocs_with_series(m, q, s, y_s, &series, params, x0, |_| {})
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn pocs_with_series(
    m: &VariationMatrix,
    q: &InnerProduct,
    s: &VertexSet,
    y_s: &DVector<f64>,
    series: &ChebSeries,
    params: &PocsParams,
    x0: Option<&DVector<f64>>,
    mut observe: impl FnMut(&DVector<f64>),
) -> Result<ReconstructionReport> {
    let mut x = match x0 {
        Some(start) => {
            q.check_len(start.len())?;
            start.clone()
        }
        None => DVector::zeros(m.n()),
    };
    for (v, y) in s.iter().zip(y_s.iter()) {
        x[v] = *y;
    }

    let mut iters = 0;
    let mut change = f64::INFINITY;
    let mut converged = false;
    while iters < params.max_iters {
        let mut next = apply_poly_filter(m, q, series, &x)?;
        for (v, y) in s.iter().zip(y_s.iter()) {
            next[v] = *y;
        }
        iters += 1;
        let delta = q.norm_unchecked(&(&next - &x));
        let base = q.norm_unchecked(&x);
        change = if base > 0.0 {
            delta / base
        } else if delta == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        x = next;
        observe(&x);
        if delta <= params.rel_tol * base {
            converged = true;
            break;
        }
    }
    let residual_s = sample_residual(&x, s, y_s);
    Ok(ReconstructionReport {
        x_hat: x,
        iters,
        residual_s,
        last_change: Some(change),
        converged,
        q_error: None,
    })
}

/// POCS run that also hands every iterate to `observe`.
pub fn pocs_reconstruct_observed(
    m: &VariationMatrix,
    q: &InnerProduct,
    s: &VertexSet,
    y_s: &DVector<f64>,
    params: &PocsParams,
    x0: Option<&DVector<f64>>,
    observe: impl FnMut(&DVector<f64>),
) -> Result<ReconstructionReport> {
    q.check_len(m.n())?;
    check_samples(m.n(), s, y_s)?;
    params.validate()?;
    let series = cheb_coeffs(params);
    pocs_with_series(m, q, s, y_s, &series, params, x0, observe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{combinatorial_laplacian, Graph, InnerProductKind};
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v: f64 = rng.gen();
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
        Graph::new(w).unwrap()
    }

    fn random_q(n: usize, rng: &mut impl Rng) -> InnerProduct {
        InnerProduct::from_diagonal(
            InnerProductKind::CustomDiagonal,
            DVector::from_fn(n, |_, _| rng.gen_range(0.2f64..3.0)),
        )
        .unwrap()
    }

    struct Fixture {
        l: VariationMatrix,
        q: InnerProduct,
        basis: SpectralBasis,
    }

    fn fixture(n: usize, seed: u64) -> (Fixture, Xoshiro256StarStar) {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let l = combinatorial_laplacian(&random_graph(n, &mut rng));
        let q = random_q(n, &mut rng);
        let basis = SpectralBasis::compute(&l, &q).unwrap();
        (Fixture { l, q, basis }, rng)
    }

    fn bandlimited(basis: &SpectralBasis, r: usize, rng: &mut impl Rng) -> DVector<f64> {
        let n = basis.n();
        let xt = DVector::from_fn(n, |l, _| if l < r { rng.gen_range(-1.0f64..1.0) } else { 0.0 });
        basis.synthesize(&xt).unwrap()
    }

    #[test]
    fn exact_recovery_and_consistency() {
        let (f, mut rng) = fixture(12, 30);
        let s = VertexSet::new(12, vec![0, 2, 5, 7, 11]).unwrap();
        let x = bandlimited(&f.basis, 5, &mut rng);
        let rep =
            consistent_reconstruct(&f.basis, &s, 5, &s.gather(&x)).unwrap().with_truth(&x, &f.q).unwrap();
        assert!(rep.q_error.unwrap() <= 1e-8 * f.q.norm(&x).unwrap());

        let y = DVector::from_fn(5, |_, _| rng.gen_range(-1.0f64..1.0));
        let rep = consistent_reconstruct(&f.basis, &s, 5, &y).unwrap();
        assert!(rep.residual_s <= 1e-8 * y.amax());
        assert_eq!(rep.iters, 0);
    }

    #[test]
    fn least_squares_matches_svd_oracle() {
        let (f, mut rng) = fixture(14, 31);
        let s = VertexSet::new(14, vec![1, 3, 4, 8, 9, 12, 13]).unwrap();
        let r = 4;
        let y = DVector::from_fn(s.len(), |_, _| rng.gen_range(-1.0f64..1.0));
        let w = DVector::from_iterator(s.len(), s.iter().map(|v| f.q.diagonal()[v].sqrt()));
        let a = DMatrix::from_fn(s.len(), r, |i, j| w[i] * f.basis.modes()[(s.indices()[i], j)]);
        let c = a.svd(true, true).solve(&y.component_mul(&w), 1e-14).unwrap();
        let oracle = f.basis.modes().columns(0, r) * c;
        let rep = consistent_reconstruct(&f.basis, &s, r, &y).unwrap();
        assert!((rep.x_hat - oracle).amax() < 1e-10);
    }

    #[test]
    fn reconstruction_errors() {
        let (f, _) = fixture(6, 32);
        let s = VertexSet::new(6, vec![0, 1]).unwrap();
        let y = DVector::zeros(2);
        assert!(consistent_reconstruct(&f.basis, &s, 3, &y).is_err());
        assert!(matches!(
            consistent_reconstruct(&f.basis, &s, 2, &DVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(consistent_reconstruct(&f.basis, &VertexSet::empty(6), 1, &DVector::zeros(0)).is_err());
    }

    #[test]
    fn covariance_identities() {
        let (f, _) = fixture(9, 33);
        let all = VertexSet::full(9);
        let e = error_covariance(&f.basis, &all, 9).unwrap();
        assert!((e - DMatrix::identity(9, 9)).amax() < 1e-9);

        let s = VertexSet::new(9, vec![0, 2, 3, 5, 8]).unwrap();
        for r in [2, 4, 5] {
            let e = error_covariance(&f.basis, &s, r).unwrap();
            let a_opt = crate::sampling::a_opt_metric(&f.basis, &s, r).unwrap();
            assert!((e.trace() - a_opt).abs() < 1e-9 * a_opt);
            // E is similar to a symmetric PSD matrix; check via Q^{1/2} E Q^{-1/2}
            let qh = f.q.sqrt_diagonal();
            let sym = DMatrix::from_fn(9, 9, |i, j| qh[i] * e[(i, j)] / qh[j]);
            let vals = sym.clone().symmetric_eigenvalues();
            assert!(vals.min() >= -1e-10);
            let sigma = e_opt_metric(&f.basis, &s, r).unwrap();
            assert!((vals.max() * sigma * sigma - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn error_bound_holds() {
        let (f, mut rng) = fixture(15, 34);
        let s = VertexSet::new(15, vec![0, 3, 4, 6, 9, 10, 14]).unwrap();
        for r in [3, 5, 7] {
            let x = bandlimited(&f.basis, r, &mut rng);
            let (lhs, rhs) = verify_error_bound(&f.basis, &s, r, &x).unwrap();
            assert!(lhs < 1e-9 && rhs < 1e-9);
            for _ in 0..30 {
                let x = DVector::from_fn(15, |_, _| rng.gen_range(-1.0f64..1.0));
                let (lhs, rhs) = verify_error_bound(&f.basis, &s, r, &x).unwrap();
                assert!(lhs <= rhs * (1.0 + 1e-8), "{lhs} > {rhs}");
            }
            let top = f.basis.mode(14);
            let (lhs, rhs) = verify_error_bound(&f.basis, &s, r, &top).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-8));
            let sigma = e_opt_metric(&f.basis, &s, r).unwrap();
            assert!((rhs * sigma - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sigmoid_series() {
        let p = PocsParams::new(2.0, 10.0);
        let series = cheb_coeffs(&p);
        assert_eq!(series.order(), 60);
        assert_eq!(sigmoid_response(2.0, 2.0, p.alpha), 0.5);
        assert!((series.eval(2.0) - 0.5).abs() <= series.max_grid_error + 1e-15);
        let width = (0.08f64.recip() - 1.0).ln() / p.alpha - (0.92f64.recip() - 1.0).ln() / p.alpha;
        assert!((width - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_sigmoid_error_concentrates_at_cutoff() {
        let lambda_max = 10.0;
        let omega = 4.0;
        let alpha = 200.0;
        let h = |l: f64| sigmoid_response(l, omega, alpha);
        let series = ChebSeries::fit(h, 200, lambda_max);
        let step = |l: f64| if l < omega { 1.0 } else { 0.0 };
        let mut far = 0.0f64;
        let mut near = 0.0f64;
        for i in 0..1000 {
            let l = lambda_max * i as f64 / 999.0;
            let err = (series.eval(l) - step(l)).abs();
            if (l - omega).abs() > 1.0 {
                far = far.max(err);
            } else {
                near = near.max(err);
            }
        }
        assert!(far < 0.02, "far error {far}");
        assert!(near > far);
    }

    #[test]
    fn order_zero_is_chebyshev_mean() {
        let lambda_max = 8.0;
        let h = |l: f64| sigmoid_response(l, 3.0, 2.0);
        let series = ChebSeries::fit(h, 0, lambda_max);
        // mean of h over the Chebyshev measure: (1/π) ∫_0^π h(λ(θ)) dθ, midpoint rule
        let steps = 200_000;
        let mean: f64 = (0..steps)
            .map(|i| {
                let t = std::f64::consts::PI * (i as f64 + 0.5) / steps as f64;
                h(0.5 * lambda_max * (t.cos() + 1.0))
            })
            .sum::<f64>()
            / steps as f64;
        assert!((series.coeffs[0] - mean).abs() < 1e-9);

        let (f, mut rng) = fixture(5, 35);
        let x = DVector::from_fn(5, |_, _| rng.gen_range(-1.0f64..1.0));
        let y = apply_poly_filter(&f.l, &f.q, &series, &x).unwrap();
        assert!((y - &x * series.coeffs[0]).amax() < 1e-15);
    }

    #[test]
    fn filter_matches_spectral_oracle() {
        let (f, mut rng) = fixture(20, 36);
        let lmax = f.basis.lambda_max() * 1.01;
        let p = PocsParams::new(0.4 * lmax, lmax);
        let series = cheb_coeffs(&p);
        let x = DVector::from_fn(20, |_, _| rng.gen_range(-1.0f64..1.0));
        let got = apply_poly_filter(&f.l, &f.q, &series, &x).unwrap();
        let spectrum = f.basis.analyze(&x).unwrap();
        let filtered = DVector::from_fn(20, |l, _| series.eval(f.basis.frequencies()[l]) * spectrum[l]);
        let oracle = f.basis.synthesize(&filtered).unwrap();
        assert!((got - &oracle).amax() < 1e-9);

        let exact = DVector::from_fn(20, |l, _| {
            sigmoid_response(f.basis.frequencies()[l], p.omega, p.alpha) * spectrum[l]
        });
        let exact = f.basis.synthesize(&exact).unwrap();
        let got = apply_poly_filter(&f.l, &f.q, &series, &x).unwrap();
        assert!(f.q.norm(&(got - exact)).unwrap() <= series.max_grid_error * f.q.norm(&x).unwrap() + 1e-9);
    }

    #[test]
    fn filter_of_constant_and_identity() {
        let (f, _) = fixture(10, 37);
        let lmax = estimate_lambda_max(&f.l, &f.q).unwrap();
        assert!(lmax >= f.basis.lambda_max());
        let p = PocsParams::new(0.3 * lmax, lmax);
        let series = cheb_coeffs(&p);
        let ones = DVector::from_element(10, 1.0);
        let out = apply_poly_filter(&f.l, &f.q, &series, &ones).unwrap();
        let h0 = sigmoid_response(0.0, p.omega, p.alpha);
        assert!((out - &ones * h0).amax() <= series.max_grid_error + 1e-10);

        let id = ChebSeries::from_coeffs(vec![1.0, 0.0, 0.0, 0.0], lmax);
        let x = DVector::from_fn(10, |i, _| i as f64 - 4.5);
        assert!((apply_poly_filter(&f.l, &f.q, &id, &x).unwrap() - &x).amax() < 1e-14);
    }

    #[test]
    fn filter_is_linear() {
        let (f, mut rng) = fixture(12, 38);
        let lmax = estimate_lambda_max(&f.l, &f.q).unwrap();
        let series = cheb_coeffs(&PocsParams::new(0.5 * lmax, lmax));
        let x = DVector::from_fn(12, |_, _| rng.gen_range(-1.0f64..1.0));
        let y = DVector::from_fn(12, |_, _| rng.gen_range(-1.0f64..1.0));
        let (a, b) = (0.7, -1.3);
        let lhs = apply_poly_filter(&f.l, &f.q, &series, &(&x * a + &y * b)).unwrap();
        let rhs = apply_poly_filter(&f.l, &f.q, &series, &x).unwrap() * a
            + apply_poly_filter(&f.l, &f.q, &series, &y).unwrap() * b;
        assert!((lhs - rhs).amax() < 1e-10);
    }

    #[test]
    fn pocs_edge_cases() {
        let (f, _) = fixture(10, 39);
        let lmax = estimate_lambda_max(&f.l, &f.q).unwrap();
        let s = VertexSet::new(10, vec![1, 4, 6]).unwrap();
        let p = PocsParams::new(0.2 * lmax, lmax);
        let rep = pocs_reconstruct(&f.l, &f.q, &s, &DVector::zeros(3), &p, None).unwrap();
        assert_eq!(rep.iters, 1);
        assert_eq!(rep.x_hat, DVector::zeros(10));

        let y = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let all_pass = PocsParams { omega: lmax, ..p };
        let rep = pocs_reconstruct(&f.l, &f.q, &s, &y, &all_pass, None).unwrap();
        assert_eq!(rep.residual_s, 0.0);

        let bad = PocsParams { cheb_order: 0, ..p };
        assert!(pocs_reconstruct(&f.l, &f.q, &s, &y, &bad, None).is_err());
        let bad = PocsParams { omega: 2.0 * lmax, ..p };
        assert!(bad.validate().is_err());
    }
}
