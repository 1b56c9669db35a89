//! Finite Gaussian mixtures and the closure operations used to build the
//! observation, joint and posterior distributions of the linear model.
//!
//! A [`GaussianMixture`] is immutable once constructed. Construction validates
//! every component, renormalizes the weights once, symmetrizes the
//! covariances and caches one Cholesky factor per component. Those factors
//! back sampling and density evaluation.

use std::ops::Range;

use nalgebra::{Cholesky, Complex, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{log_sum_exp, Scalar};

/// One weighted Gaussian component. Plain data; validated when it becomes
/// part of a [`GaussianMixture`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent<T: Scalar> {
    pub weight: T,
    pub mean: DVector<T>,
    pub covariance: DMatrix<T>,
}

impl<T: Scalar> GaussianComponent<T> {
    pub fn new(weight: T, mean: DVector<T>, covariance: DMatrix<T>) -> Self {
        Self {
            weight,
            mean,
            covariance,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Checks the mixture invariants and reports the first violation.
///
/// Components are checked in order (dimension, finiteness, weight sign,
/// symmetry, positive definiteness); the weight sum is checked last.
pub fn validate<T: Scalar>(components: &[GaussianComponent<T>]) -> Result<()> {
    let first = components.first().ok_or(Error::EmptyMixture)?;
    let dim = first.dim();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: 1,
            found: 0,
        });
    }
    for (index, c) in components.iter().enumerate() {
        check_component(index, dim, c)?;
    }
    let sum: f64 = components.iter().map(|c| c.weight.as_f64()).sum();
    if (sum - 1.0).abs() > T::WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightSum { sum });
    }
    Ok(())
}

fn check_component<T: Scalar>(index: usize, dim: usize, c: &GaussianComponent<T>) -> Result<()> {
    let (rows, cols) = c.covariance.shape();
    for found in [c.mean.len(), rows, cols] {
        if found != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found,
            });
        }
    }
    let finite = c.weight.is_finite()
        && c.mean.iter().all(|v| v.is_finite())
        && c.covariance.iter().all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFinite { index });
    }
    if c.weight < T::zero() {
        return Err(Error::NegativeWeight {
            index,
            weight: c.weight.as_f64(),
        });
    }
    let scale = c.covariance.iter().fold(0.0_f64, |m, v| m.max(v.as_f64().abs()));
    let mut asymmetry = 0.0_f64;
    for i in 0..dim {
        for j in 0..i {
            asymmetry = asymmetry.max((c.covariance[(i, j)] - c.covariance[(j, i)]).as_f64().abs());
        }
    }
    if asymmetry > T::SYMMETRY_TOLERANCE * scale {
        return Err(Error::NotSymmetric { index, asymmetry });
    }
    if cholesky(&c.covariance).is_none() {
        return Err(Error::NotPositiveDefinite { index });
    }
    Ok(())
}

/// Cholesky factorization that also rejects numerically singular input.
///
/// A pivot `L_ii²` below `64 ε C_ii` means the matrix is positive definite
/// only by roundoff (for example `D C Dᵀ` with rank-deficient `D`).
pub(crate) fn cholesky<T: Scalar>(m: &DMatrix<T>) -> Option<Cholesky<T, Dyn>> {
    let chol = m.clone().cholesky()?;
    let threshold = T::cast(64.0) * T::default_epsilon();
    let l = chol.l_dirty();
    let degenerate = (0..m.nrows()).any(|i| l[(i, i)] * l[(i, i)] <= threshold * m[(i, i)]);
    if degenerate {
        None
    } else {
        Some(chol)
    }
}

/// Returns `(M + Mᵀ) / 2`.
pub(crate) fn symmetrize<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::cast(0.5)
}

/// Log-density of `N(mean, L Lᵀ)` at `point`, given the lower factor `L` and
/// `ln det(L Lᵀ)`.
pub(crate) fn gaussian_log_density<T: Scalar>(
    factor: &DMatrix<T>,
    log_det: T,
    mean: &DVector<T>,
    point: &DVector<T>,
) -> T {
    let diff = point - mean;
    let z = factor
        .solve_lower_triangular(&diff)
        .expect("Cholesky factor has a nonzero diagonal");
    let n = T::cast(mean.len() as f64);
    -(n * T::two_pi().ln() + log_det + z.norm_squared()) * T::cast(0.5)
}

pub(crate) fn log_det_from_factor<T: Scalar>(factor: &DMatrix<T>) -> T {
    factor.diagonal().iter().fold(T::zero(), |acc, v| acc + v.ln()) * T::cast(2.0)
}

/// A finite mixture of multivariate Gaussians over `Rᵈ`.
#[derive(Debug, Clone)]
pub struct GaussianMixture<T: Scalar> {
    components: Vec<GaussianComponent<T>>,
    factors: Vec<DMatrix<T>>,
    log_dets: Vec<T>,
    cumulative: Vec<f64>,
    dim: usize,
}

impl<T: Scalar> PartialEq for GaussianMixture<T> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<T: Scalar> GaussianMixture<T> {
    pub fn new(components: Vec<GaussianComponent<T>>) -> Result<Self> {
        validate(&components)?;
        let total = components.iter().fold(T::zero(), |acc, c| acc + c.weight);
        // Weights already normalized up to summation roundoff are kept
        // bit-for-bit, so that join / marginal / identity round trips are exact.
        let roundoff = T::cast(components.len() as f64) * T::default_epsilon();
        let renormalize = (total - T::one()).abs() > roundoff;
        let mut components = components;
        for c in components.iter_mut() {
            if renormalize {
                c.weight /= total;
            }
            c.covariance = symmetrize(&c.covariance);
        }
        let mut factors = Vec::with_capacity(components.len());
        let mut log_dets = Vec::with_capacity(components.len());
        for (index, c) in components.iter().enumerate() {
            let factor = cholesky(&c.covariance)
                .ok_or(Error::NotPositiveDefinite { index })?
                .unpack();
            log_dets.push(log_det_from_factor(&factor));
            factors.push(factor);
        }
        let mut acc = 0.0;
        let cumulative = components
            .iter()
            .map(|c| {
                acc += c.weight.as_f64();
                acc
            })
            .collect();
        let dim = components[0].dim();
        Ok(Self {
            components,
            factors,
            log_dets,
            cumulative,
            dim,
        })
    }

    /// Single-component mixture `N(mean, covariance)`.
    pub fn gaussian(mean: DVector<T>, covariance: DMatrix<T>) -> Result<Self> {
        Self::new(vec![GaussianComponent::new(T::one(), mean, covariance)])
    }

    /// Re-checks the invariants of the stored components.
    pub fn validate(&self) -> Result<()> {
        validate(&self.components)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[GaussianComponent<T>] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &GaussianComponent<T> {
        &self.components[index]
    }

    /// Lower Cholesky factor of component `index`'s covariance.
    pub fn cholesky_factor(&self, index: usize) -> &DMatrix<T> {
        &self.factors[index]
    }

    pub fn weights(&self) -> impl Iterator<Item = T> + '_ {
        self.components.iter().map(|c| c.weight)
    }

    /// `Σ_k p_k u_k`.
    pub fn mean(&self) -> DVector<T> {
        self.components
            .iter()
            .fold(DVector::zeros(self.dim), |acc, c| acc + &c.mean * c.weight)
    }

    /// `Σ_k p_k (C_k + u_k u_kᵀ) − u uᵀ`, accumulated in the centered form
    /// `Σ_k p_k (C_k + (u_k − u)(u_k − u)ᵀ)` so the result is PSD by construction.
    pub fn covariance(&self) -> DMatrix<T> {
        let mean = self.mean();
        let mut cov = DMatrix::zeros(self.dim, self.dim);
        for c in &self.components {
            let centered = &c.mean - &mean;
            cov += (&c.covariance + &centered * centered.transpose()) * c.weight;
        }
        symmetrize(&cov)
    }

    /// `E‖v‖² = Σ_k p_k (Tr C_k + ‖u_k‖²)`.
    pub fn second_moment(&self) -> T {
        self.components
            .iter()
            .fold(T::zero(), |acc, c| acc + c.weight * (c.covariance.trace() + c.mean.norm_squared()))
    }

    /// Log-density of each component including its log weight. Zero-weight
    /// components give `-inf`.
    pub fn weighted_component_log_densities(&self, point: &DVector<T>) -> Result<Vec<T>> {
        self.check_point(point, "point")?;
        Ok(self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.weight == T::zero() {
                    T::cast(f64::NEG_INFINITY)
                } else {
                    c.weight.ln() + gaussian_log_density(&self.factors[i], self.log_dets[i], &c.mean, point)
                }
            })
            .collect())
    }

    /// `ln Σ_k p_k N(point; u_k, C_k)` by log-sum-exp over the component
    /// log-densities; the linear-domain density is never formed.
    pub fn log_density(&self, point: &DVector<T>) -> Result<T> {
        Ok(log_sum_exp(&self.weighted_component_log_densities(point)?))
    }

    fn check_point(&self, point: &DVector<T>, what: &'static str) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::Shape {
                what,
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(())
    }

    /// Picks a component index from a uniform draw in `[0, 1)`.
    /// Zero-weight components occupy an empty interval and are never chosen.
    fn pick_component(&self, u: f64) -> usize {
        let target = u * self.cumulative[self.cumulative.len() - 1];
        match self.cumulative.iter().position(|&c| target < c) {
            Some(i) => i,
            None => self
                .components
                .iter()
                .rposition(|c| c.weight > T::zero())
                .unwrap_or(0),
        }
    }

    /// One draw together with the index of the component that produced it.
    ///
    /// Consumes one `f64` uniform for the component and `d` standard normals
    /// (ziggurat method of `rand_distr::StandardNormal`) for the Gaussian draw
    /// `u_k + L_k z`.
    pub fn draw_labeled<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, DVector<T>) {
        let k = self.pick_component(rng.random::<f64>());
        let z = DVector::from_fn(self.dim, |_, _| T::cast(rng.sample::<f64, _>(StandardNormal)));
        (k, &self.components[k].mean + &self.factors[k] * z)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<T> {
        self.draw_labeled(rng).1
    }

    /// `count` independent draws from a ChaCha20 stream seeded with `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<DVector<T>> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }

    /// Distribution of `D v + a` for `v` drawn from this mixture: components
    /// `(p_k, D u_k + a, D C_k Dᵀ)`.
    ///
    /// Fails with [`Error::NotPositiveDefinite`] when `D` is rank deficient and
    /// a transformed covariance becomes singular.
    pub fn affine_transform(&self, d: &DMatrix<T>, a: &DVector<T>) -> Result<Self> {
        if d.ncols() != self.dim {
            return Err(Error::Shape {
                what: "transform columns",
                expected: self.dim,
                found: d.ncols(),
            });
        }
        if a.len() != d.nrows() {
            return Err(Error::Shape {
                what: "offset length",
                expected: d.nrows(),
                found: a.len(),
            });
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                GaussianComponent::new(
                    c.weight,
                    d * &c.mean + a,
                    symmetrize(&(d * &c.covariance * d.transpose())),
                )
            })
            .collect();
        Self::new(components)
    }

    /// Distribution of `a v`: means scale by `a`, covariances by `a²`.
    pub fn scaled(&self, a: T) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| GaussianComponent::new(c.weight, &c.mean * a, &c.covariance * (a * a)))
            .collect();
        Self::new(components)
    }

    /// Mixture of the stacked vector `[v; w]` for independent `v` (this
    /// mixture) and `w` (`other`).
    ///
    /// Components are ordered row-major: index `k * other.len() + l` holds
    /// weight `p_k q_l`, mean `[u_k; u_l]` and covariance `diag(C_k, C_l)`.
    pub fn independent_join(&self, other: &Self) -> Self {
        let (d1, d2) = (self.dim, other.dim);
        let mut components = Vec::with_capacity(self.len() * other.len());
        for a in &self.components {
            for b in &other.components {
                let mean = DVector::from_iterator(d1 + d2, a.mean.iter().chain(b.mean.iter()).copied());
                let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
                cov.view_mut((0, 0), (d1, d1)).copy_from(&a.covariance);
                cov.view_mut((d1, d1), (d2, d2)).copy_from(&b.covariance);
                components.push(GaussianComponent::new(a.weight * b.weight, mean, cov));
            }
        }
        Self::new(components).expect("join of valid mixtures is valid")
    }

    /// Marginal over the coordinates in `keep`.
    pub fn marginal(&self, keep: Range<usize>) -> Result<Self> {
        if keep.start >= keep.end || keep.end > self.dim {
            return Err(Error::RangeOutOfBounds {
                start: keep.start,
                end: keep.end,
                dim: self.dim,
            });
        }
        let n = keep.end - keep.start;
        let components = self
            .components
            .iter()
            .map(|c| {
                GaussianComponent::new(
                    c.weight,
                    c.mean.rows(keep.start, n).into_owned(),
                    c.covariance.view((keep.start, keep.start), (n, n)).into_owned(),
                )
            })
            .collect();
        Self::new(components)
    }

    /// `φ(t) = Σ_k p_k exp(i tᵀu_k − ½ tᵀC_k t)`.
    pub fn characteristic_function(&self, t: &DVector<T>) -> Result<Complex<T>> {
        self.check_point(t, "frequency")?;
        let half = T::cast(0.5);
        Ok(self.components.iter().fold(Complex::new(T::zero(), T::zero()), |acc, c| {
            let phase = t.dot(&c.mean);
            let magnitude = c.weight * (-(t.dot(&(&c.covariance * t))) * half).exp();
            acc + Complex::new(magnitude * phase.cos(), magnitude * phase.sin())
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn scalar(w: f64, m: f64, v: f64) -> GaussianComponent<f64> {
        GaussianComponent::new(w, dvector![m], dmatrix![v])
    }

    #[test]
    fn validate_accepts_standard_normal() {
        assert_eq!(validate(&[scalar(1.0, 0.0, 1.0)]), Ok(()));
    }

    #[test]
    fn validate_reports_weight_sum() {
        let err = validate(&[scalar(0.6, 0.0, 1.0), scalar(0.5, 1.0, 1.0)]).unwrap_err();
        assert_eq!(err.to_string(), "weights sum 1.1, expected 1");
    }

    #[test]
    fn validate_reports_indefinite_covariance() {
        let c = GaussianComponent::new(1.0, dvector![0.0, 0.0], dmatrix![1.0, 2.0; 2.0, 1.0]);
        let err = validate(&[c]).unwrap_err();
        assert_eq!(err, Error::NotPositiveDefinite { index: 0 });
        assert!(err.to_string().contains("not positive definite"));
    }

    #[test]
    fn validate_reports_asymmetry_and_index() {
        let good = GaussianComponent::new(0.5, dvector![0.0, 0.0], DMatrix::identity(2, 2));
        let bad = GaussianComponent::new(0.5, dvector![0.0, 0.0], dmatrix![1.0, 0.1; 0.0, 1.0]);
        assert!(matches!(validate(&[good, bad]), Err(Error::NotSymmetric { index: 1, .. })));
    }

    #[test]
    fn validate_reports_dimension_mismatch() {
        let a = scalar(0.5, 0.0, 1.0);
        let b = GaussianComponent::new(0.5, dvector![0.0, 0.0], DMatrix::identity(2, 2));
        assert_eq!(
            validate(&[a, b]),
            Err(Error::DimensionMismatch {
                index: 1,
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn validate_rejects_empty_and_negative() {
        assert_eq!(validate::<f64>(&[]), Err(Error::EmptyMixture));
        assert!(matches!(
            validate(&[scalar(-0.5, 0.0, 1.0), scalar(1.5, 0.0, 1.0)]),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
    }

    #[test]
    fn construction_renormalizes_within_tolerance() {
        let m = GaussianMixture::new(vec![scalar(0.5 + 4e-10, 0.0, 1.0), scalar(0.5, 1.0, 1.0)]).unwrap();
        let sum: f64 = m.weights().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_components_are_kept_but_never_drawn() {
        let m = GaussianMixture::new(vec![scalar(0.0, -100.0, 1.0), scalar(1.0, 0.0, 1.0), scalar(0.0, 100.0, 1.0)])
            .unwrap();
        assert_eq!(m.len(), 3);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..2000 {
            assert_eq!(m.draw_labeled(&mut rng).0, 1);
        }
        assert!(m.log_density(&dvector![0.0]).unwrap().is_finite());
    }

    #[test]
    fn mean_examples() {
        let m = GaussianMixture::new(vec![scalar(0.25, 0.0, 1.0), scalar(0.75, 4.0, 1.0)]).unwrap();
        assert!((m.mean()[0] - 3.0).abs() < 1e-15);
        let m = GaussianMixture::new(vec![scalar(0.5, -1.0, 1.0), scalar(0.5, 1.0, 1.0)]).unwrap();
        assert_eq!(m.mean()[0], 0.0);
        let g = GaussianMixture::gaussian(dvector![1.5, -2.0], DMatrix::identity(2, 2)).unwrap();
        assert_eq!(g.mean(), dvector![1.5, -2.0]);
    }

    #[test]
    fn covariance_of_symmetric_pair_is_two() {
        // 0.5 (1 + 1) + 0.5 (1 + 1) − 0 = 2
        let m = GaussianMixture::new(vec![scalar(0.5, -1.0, 1.0), scalar(0.5, 1.0, 1.0)]).unwrap();
        assert!((m.covariance()[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_of_single_component_is_its_own() {
        let c = dmatrix![2.0, 0.5; 0.5, 1.0];
        let g = GaussianMixture::gaussian(dvector![3.0, 4.0], c.clone()).unwrap();
        assert!((g.covariance() - c).abs().max() < 1e-15);
    }

    #[test]
    fn log_density_examples() {
        let g = GaussianMixture::gaussian(dvector![0.0_f64], dmatrix![1.0]).unwrap();
        let v = g.log_density(&dvector![0.0]).unwrap();
        assert!((v + 0.918_938_533_204_672_7).abs() < 1e-12);

        let twin = GaussianMixture::new(vec![scalar(0.3, 0.0, 1.0), scalar(0.7, 0.0, 1.0)]).unwrap();
        assert!((twin.log_density(&dvector![0.7]).unwrap() - g.log_density(&dvector![0.7]).unwrap()).abs() < 1e-14);

        // 400 standard deviations out: −0.5·400² − ½ln 2π, far below exp underflow.
        let far = g.log_density(&dvector![400.0]).unwrap();
        assert!(far.is_finite());
        assert!((far - (-80_000.0 - 0.918_938_533_204_672_7)).abs() < 1e-9);

        assert!(matches!(g.log_density(&dvector![0.0, 1.0]), Err(Error::Shape { .. })));
    }

    #[test]
    fn sample_count_zero_is_empty() {
        let g = GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap();
        assert!(g.sample(1, 0).is_empty());
    }

    #[test]
    fn sample_is_deterministic_in_seed() {
        let g = GaussianMixture::new(vec![scalar(0.4, -2.0, 1.0), scalar(0.6, 2.0, 0.5)]).unwrap();
        assert_eq!(g.sample(11, 50), g.sample(11, 50));
        assert_ne!(g.sample(11, 50), g.sample(12, 50));
    }

    #[test]
    fn affine_examples() {
        let g = GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap();
        let t = g.affine_transform(&dmatrix![2.0], &dvector![1.0]).unwrap();
        assert_eq!(t.component(0).mean, dvector![1.0]);
        assert_eq!(t.component(0).covariance, dmatrix![4.0]);

        let m = GaussianMixture::new(vec![
            GaussianComponent::new(0.3, dvector![1.0, 2.0], dmatrix![2.0, 0.3; 0.3, 1.0]),
            GaussianComponent::new(0.7, dvector![-1.0, 0.5], dmatrix![1.0, -0.2; -0.2, 3.0]),
        ])
        .unwrap();
        let same = m.affine_transform(&DMatrix::identity(2, 2), &DVector::zeros(2)).unwrap();
        assert_eq!(same, m);

        let s = m.scaled(3.0).unwrap();
        for (a, b) in s.components().iter().zip(m.components()) {
            assert_eq!(a.mean, &b.mean * 3.0);
            assert_eq!(a.covariance, &b.covariance * 9.0);
        }
    }

    #[test]
    fn affine_rank_deficient_is_reported() {
        let g = GaussianMixture::gaussian(dvector![0.0, 0.0], DMatrix::identity(2, 2)).unwrap();
        let d = dmatrix![1.0, 1.0; 2.0, 2.0];
        assert_eq!(
            g.affine_transform(&d, &DVector::zeros(2)),
            Err(Error::NotPositiveDefinite { index: 0 })
        );
    }

    #[test]
    fn join_examples() {
        let a = GaussianMixture::gaussian(dvector![1.0], dmatrix![2.0]).unwrap();
        let b = GaussianMixture::gaussian(dvector![-1.0, 0.0], dmatrix![1.0, 0.5; 0.5, 1.0]).unwrap();
        let j = a.independent_join(&b);
        assert_eq!(j.len(), 1);
        assert_eq!(
            j.component(0).covariance,
            dmatrix![2.0, 0.0, 0.0; 0.0, 1.0, 0.5; 0.0, 0.5, 1.0]
        );

        let p = GaussianMixture::new(vec![scalar(0.5, 0.0, 1.0), scalar(0.5, 1.0, 1.0)]).unwrap();
        let q = GaussianMixture::new(vec![scalar(0.3, 0.0, 1.0), scalar(0.7, 1.0, 1.0)]).unwrap();
        let w: Vec<f64> = p.independent_join(&q).weights().collect();
        let expected = [0.15, 0.35, 0.15, 0.35];
        for (x, e) in w.iter().zip(expected) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_examples() {
        let g = GaussianMixture::gaussian(dvector![1.0, 2.0], dmatrix![2.0, 1.0; 1.0, 3.0]).unwrap();
        let m = g.marginal(0..1).unwrap();
        assert_eq!(m.component(0).mean, dvector![1.0]);
        assert_eq!(m.component(0).covariance, dmatrix![2.0]);
        assert_eq!(g.marginal(0..2).unwrap(), g);
        assert!(matches!(g.marginal(1..3), Err(Error::RangeOutOfBounds { .. })));
        assert!(matches!(g.marginal(1..1), Err(Error::RangeOutOfBounds { .. })));
    }

    #[test]
    fn characteristic_function_examples() {
        let g = GaussianMixture::gaussian(dvector![0.0_f64], dmatrix![1.0]).unwrap();
        let one = g.characteristic_function(&dvector![0.0]).unwrap();
        assert_eq!((one.re, one.im), (1.0, 0.0));
        let v = g.characteristic_function(&dvector![1.0]).unwrap();
        assert!((v.re - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn single_precision_mixture() {
        let m = GaussianMixture::<f32>::new(vec![
            GaussianComponent::new(0.25, dvector![0.0], dmatrix![1.0]),
            GaussianComponent::new(0.75, dvector![4.0], dmatrix![1.0]),
        ])
        .unwrap();
        assert!((m.mean()[0] - 3.0).abs() < 1e-6);
        assert!((m.covariance()[(0, 0)] - 4.0).abs() < 1e-5);
    }
}
