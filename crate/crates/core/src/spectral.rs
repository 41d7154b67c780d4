//! Graph Fourier transform for a variation matrix `M` and an inner product `Q`.
//!
//! The Fourier modes are the `Q`-orthonormal eigenvectors of `Z = Q^{-1} M`. They are
//! obtained from the symmetric matrix `Q^{-1/2} M Q^{-1/2} = V Λ V^T` as `U = Q^{-1/2} V`,
//! which keeps the spectrum real and the basis orthonormal in the `Q` inner product.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{InnerProduct, VariationMatrix};

/// Components below this magnitude are skipped when fixing eigenvector signs.
const SIGN_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralBasis {
    modes: DMatrix<f64>,
    frequencies: DVector<f64>,
    q: InnerProduct,
}

/// `Q^{-1/2} M Q^{-1/2}` for diagonal `Q`.
pub(crate) fn symmetrized_operator(m: &VariationMatrix, q: &InnerProduct) -> DMatrix<f64> {
    let inv_sqrt = q.sqrt_diagonal().map(|v| 1.0 / v);
    let n = m.n();
    let mut s = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * m.matrix()[(i, j)] * inv_sqrt[j]);
    // exact symmetry before the eigensolver
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// Symmetric eigendecomposition with ascending eigenvalues and a deterministic sign:
/// the first component of magnitude above `SIGN_EPS` of every eigenvector is positive.
pub(crate) fn sorted_symmetric_eigen(a: DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let eig = a.symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) || eig.eigenvectors.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotFinite);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        if let Some(first) = v.iter().find(|c| c.abs() > SIGN_EPS) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        vectors.set_column(col, &v);
    }
    Ok((values, vectors))
}

impl SpectralBasis {
    pub fn compute(m: &VariationMatrix, q: &InnerProduct) -> Result<Self> {
        q.check_len(m.n())?;
        let (frequencies, v) = sorted_symmetric_eigen(symmetrized_operator(m, q))?;
        let inv_sqrt = q.sqrt_diagonal().map(|v| 1.0 / v);
        let mut modes = v;
        for (i, mut row) in modes.row_iter_mut().enumerate() {
            row *= inv_sqrt[i];
        }
        Ok(Self { modes, frequencies, q: q.clone() })
    }

    pub fn n(&self) -> usize {
        self.frequencies.len()
    }

    /// Fourier modes as columns, ordered by ascending frequency.
    pub fn modes(&self) -> &DMatrix<f64> {
        &self.modes
    }

    pub fn mode(&self, l: usize) -> DVector<f64> {
        self.modes.column(l).into_owned()
    }

    pub fn frequencies(&self) -> &DVector<f64> {
        &self.frequencies
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.q
    }

    pub fn lambda_max(&self) -> f64 {
        self.frequencies[self.n() - 1]
    }

    /// Spectrum `U^T Q x`.
    pub fn analyze(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.q.check_len(x.len())?;
        let qx = x.component_mul(self.q.diagonal());
        Ok(self.modes.tr_mul(&qx))
    }

    /// Signal `U x̃`.
    pub fn synthesize(&self, spectrum: &DVector<f64>) -> Result<DVector<f64>> {
        self.q.check_len(spectrum.len())?;
        Ok(&self.modes * spectrum)
    }

    /// `Q`-orthogonal split of `x` into its component on the first `r` modes and the rest.
    pub fn bandlimit_split(&self, x: &DVector<f64>, r: usize) -> Result<(DVector<f64>, DVector<f64>)> {
        if r > self.n() {
            return Err(Error::InvalidParameter(format!("band of {r} modes exceeds {} vertices", self.n())));
        }
        let spectrum = self.analyze(x)?;
        let band = self.modes.columns(0, r) * spectrum.rows(0, r);
        let rest = x - &band;
        Ok((band, rest))
    }

    /// True when every coefficient above `omega` is at most `tol` times the spectrum norm.
    pub fn is_bandlimited(&self, x: &DVector<f64>, omega: f64, tol: f64) -> Result<bool> {
        let spectrum = self.analyze(x)?;
        let bound = tol * spectrum.norm();
        Ok(self
            .frequencies
            .iter()
            .zip(spectrum.iter())
            .filter(|(lambda, _)| **lambda > omega)
            .all(|(_, c)| c.abs() <= bound))
    }

    /// Rows `s` and the first `r` columns of `U`.
    pub(crate) fn sampled_band(&self, s: &[usize], r: usize) -> DMatrix<f64> {
        DMatrix::from_fn(s.len(), r, |i, j| self.modes[(s[i], j)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{combinatorial_laplacian, degree_matrix, Graph, InnerProductKind};
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

    #[test]
    fn path_frequencies() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let b = SpectralBasis::compute(&combinatorial_laplacian(&g), &InnerProduct::identity(3)).unwrap();
        // det(L - λI) = -λ(λ - 1)(λ - 3)
        for (got, want) in b.frequencies().iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn lowest_mode_is_constant() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(1);
        let g = random_graph(10, &mut rng);
        let l = combinatorial_laplacian(&g);
        for q in [InnerProduct::identity(10), degree_matrix(&g).unwrap(), random_q(10, &mut rng)] {
            let b = SpectralBasis::compute(&l, &q).unwrap();
            assert!(b.frequencies()[0].abs() < 1e-10);
            let u0 = b.mode(0);
            let c = 1.0 / q.diagonal().sum().sqrt();
            assert!(u0.iter().all(|v| (v - c).abs() < 1e-9));
        }
    }

    #[test]
    fn basis_invariants() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(2);
        for n in [4, 8, 17] {
            let g = random_graph(n, &mut rng);
            let l = combinatorial_laplacian(&g);
            let q = random_q(n, &mut rng);
            let b = SpectralBasis::compute(&l, &q).unwrap();
            let u = b.modes();
            let gram = u.transpose() * q.to_dense() * u;
            assert!((gram - DMatrix::identity(n, n)).amax() < 1e-10);
            let mnorm = l.matrix().norm();
            for k in 0..n {
                let ul = b.mode(k);
                let resid = l.matrix() * &ul - q.to_dense() * &ul * b.frequencies()[k];
                assert!(resid.norm() <= 1e-8 * mnorm);
                assert!((b.frequencies()[k] - l.quadratic_form(&ul)).abs() <= 1e-9);
            }
            assert!(b.frequencies().as_slice().windows(2).all(|w| w[0] <= w[1]));
            assert!(b.frequencies()[0] >= -1e-10);
        }
    }

    #[test]
    fn identity_q_matches_plain_eigensolver() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(4);
        let g = random_graph(12, &mut rng);
        let l = combinatorial_laplacian(&g);
        let b = SpectralBasis::compute(&l, &InnerProduct::identity(12)).unwrap();
        let mut plain: Vec<f64> = l.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
        plain.sort_by(f64::total_cmp);
        for (a, p) in b.frequencies().iter().zip(plain) {
            assert!((a - p).abs() < 1e-9);
        }
    }

    #[test]
    fn analysis_and_synthesis() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(6);
        let n = 9;
        let g = random_graph(n, &mut rng);
        let q = random_q(n, &mut rng);
        let b = SpectralBasis::compute(&combinatorial_laplacian(&g), &q).unwrap();

        let e3 = b.analyze(&b.mode(3)).unwrap();
        for (l, v) in e3.iter().enumerate() {
            let want = if l == 3 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-10);
        }
        assert_eq!(b.analyze(&DVector::zeros(n)).unwrap(), DVector::zeros(n));
        let mut e0 = DVector::zeros(n);
        e0[0] = 1.0;
        assert!((b.synthesize(&e0).unwrap() - b.mode(0)).amax() < 1e-15);

        for _ in 0..100 {
            let x = DVector::from_fn(n, |_, _| rng.gen_range(-1.0f64..1.0));
            let xt = b.analyze(&x).unwrap();
            assert!((b.synthesize(&xt).unwrap() - &x).amax() < 1e-10);
            assert!((q.norm(&x).unwrap() - xt.norm()).abs() < 1e-10);
        }
        assert!(b.analyze(&DVector::zeros(n + 1)).is_err());
    }

    #[test]
    fn band_split() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(8);
        let n = 10;
        let g = random_graph(n, &mut rng);
        let q = random_q(n, &mut rng);
        let b = SpectralBasis::compute(&combinatorial_laplacian(&g), &q).unwrap();
        let x = DVector::from_fn(n, |_, _| rng.gen_range(-1.0f64..1.0));

        let (par, perp) = b.bandlimit_split(&x, n).unwrap();
        assert!((par - &x).amax() < 1e-10 && perp.amax() < 1e-10);
        let (par, perp) = b.bandlimit_split(&x, 0).unwrap();
        assert!(par.amax() == 0.0 && perp == x);

        let r = n / 2;
        let (par, perp) = b.bandlimit_split(&x, r).unwrap();
        assert!(q.inner(&par, &perp).unwrap().abs() < 1e-10);
        assert!((&par + &perp - &x).amax() < 1e-14);
        assert!(b.is_bandlimited(&par, b.frequencies()[r - 1], 1e-9).unwrap());
        assert!(b.bandlimit_split(&x, n + 1).is_err());
    }

    #[test]
    fn bandlimited_modes() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(9);
        let n = 7;
        let g = random_graph(n, &mut rng);
        let b = SpectralBasis::compute(&combinatorial_laplacian(&g), &InnerProduct::identity(n)).unwrap();
        assert!(b.is_bandlimited(&b.mode(0), 0.0, 1e-9).unwrap());
        let top = b.frequencies()[n - 1];
        assert!(!b.is_bandlimited(&b.mode(n - 1), top * 0.99, 1e-9).unwrap());

        let mut xt = DVector::zeros(n);
        xt[0] = 0.3;
        xt[2] = -1.2;
        let x = b.synthesize(&xt).unwrap();
        assert!(b.is_bandlimited(&x, b.frequencies()[2], 1e-9).unwrap());
    }
}
