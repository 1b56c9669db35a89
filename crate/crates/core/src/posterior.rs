//! Posterior mixture `f(x | y)` and the MMSE / LMMSE estimators.
//!
//! Conditioned on the component pair `(k, l)`, `x` and `y` are jointly
//! Gaussian, so each pair contributes a Gaussian posterior with mean
//! `u_k + W_kl (y − u_y,kl)` and covariance `C_k − W_kl H C_k`, where the gain
//! is `W_kl = C_k Hᵀ C_yy,kl⁻¹`. The pair is weighted by its responsibility
//! `α_kl(y) ∝ p_k q_l N(y; u_y,kl, C_yy,kl)`. Everything except `α` and the
//! component means is independent of `y` and lives in
//! [`PrecomputedEstimator`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linear_model::BayesianLinearModel;
use crate::mixture::{cholesky, gaussian_log_density, log_det_from_factor, symmetrize, GaussianMixture};
use crate::scalar::Scalar;

/// Per-`(k, l)` quantities reused for every observation.
#[derive(Debug, Clone)]
pub struct PairTerms<T: Scalar> {
    pub k: usize,
    pub l: usize,
    pub weight: T,
    pub log_weight: T,
    pub mean_x: DVector<T>,
    pub mean_y: DVector<T>,
    /// Lower Cholesky factor of `C_yy,kl`.
    pub observation_factor: DMatrix<T>,
    pub observation_log_det: T,
    pub gain: DMatrix<T>,
    pub posterior_covariance: DMatrix<T>,
}

#[derive(Debug, Clone)]
pub struct PrecomputedEstimator<T: Scalar> {
    x_prior: GaussianMixture<T>,
    x_dim: usize,
    y_dim: usize,
    noise_components: usize,
    pairs: Vec<PairTerms<T>>,
}

impl<T: Scalar> PrecomputedEstimator<T> {
    /// Factorizes every `C_yy,kl = H C_k Hᵀ + C_l` once and derives gains and
    /// component posterior covariances from that factor. `C_yy⁻¹` is never
    /// formed; the gain comes from a Cholesky solve against `H C_k`.
    pub fn new(model: &BayesianLinearModel<T>) -> Result<Self> {
        let h = model.h();
        let mut pairs = Vec::with_capacity(model.pair_count());
        for (k, xc) in model.x_prior().components().iter().enumerate() {
            // H C_k, the cross covariance C_yx,k
            let cross = h * &xc.covariance;
            let hcht = &cross * h.transpose();
            let hu = h * &xc.mean;
            for (l, nc) in model.noise().components().iter().enumerate() {
                let cyy = symmetrize(&(&hcht + &nc.covariance));
                let chol = cholesky(&cyy).ok_or(Error::ObservationCovariance { k, l })?;
                // C_yy⁻¹ H C_k = (C_k Hᵀ C_yy⁻¹)ᵀ
                let solved = chol.solve(&cross);
                let gain = solved.transpose();
                let posterior_covariance = symmetrize(&(&xc.covariance - solved.transpose() * &cross));
                let factor = chol.unpack();
                let weight = xc.weight * nc.weight;
                pairs.push(PairTerms {
                    k,
                    l,
                    weight,
                    log_weight: weight.ln(),
                    mean_x: xc.mean.clone(),
                    mean_y: &hu + &nc.mean,
                    observation_log_det: log_det_from_factor(&factor),
                    observation_factor: factor,
                    gain,
                    posterior_covariance,
                });
            }
        }
        Ok(Self {
            x_prior: model.x_prior().clone(),
            x_dim: model.x_dim(),
            y_dim: model.y_dim(),
            noise_components: model.noise().len(),
            pairs,
        })
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn x_prior(&self) -> &GaussianMixture<T> {
        &self.x_prior
    }

    /// Pair terms in row-major `(k, l)` order.
    pub fn pairs(&self) -> &[PairTerms<T>] {
        &self.pairs
    }

    /// Flat index of pair `(k, l)`.
    pub fn pair_index(&self, k: usize, l: usize) -> usize {
        k * self.noise_components + l
    }

    /// Multiplies one pair's gain by `factor`. Only for building negative
    /// controls in tests of the oracle check.
    #[doc(hidden)]
    pub fn corrupt_gain(&mut self, pair: usize, factor: T) {
        self.pairs[pair].gain *= factor;
    }

    fn check_observation(&self, y: &DVector<T>) -> Result<()> {
        if y.len() != self.y_dim {
            return Err(Error::Shape {
                what: "observation",
                expected: self.y_dim,
                found: y.len(),
            });
        }
        Ok(())
    }

    /// `α_kl(y)`, the softmax of `ln(p_k q_l) + ln N(y; u_y,kl, C_yy,kl)`,
    /// in row-major `(k, l)` order.
    pub fn responsibilities(&self, y: &DVector<T>) -> Result<Vec<T>> {
        self.check_observation(y)?;
        let mut logits: Vec<T> = self
            .pairs
            .iter()
            .map(|p| {
                if p.weight == T::zero() {
                    T::cast(f64::NEG_INFINITY)
                } else {
                    p.log_weight + gaussian_log_density(&p.observation_factor, p.observation_log_det, &p.mean_y, y)
                }
            })
            .collect();
        let max = logits
            .iter()
            .copied()
            .fold(T::cast(f64::NEG_INFINITY), |m, v| if v > m { v } else { m });
        let mut total = T::zero();
        for v in logits.iter_mut() {
            *v = (*v - max).exp();
            total += *v;
        }
        for v in logits.iter_mut() {
            *v /= total;
        }
        Ok(logits)
    }

    /// Full posterior mixture for observation `y`.
    pub fn posterior(&self, y: &DVector<T>) -> Result<PosteriorGM<'_, T>> {
        let responsibilities = self.responsibilities(y)?;
        let means = self
            .pairs
            .iter()
            .map(|p| &p.mean_x + &p.gain * (y - &p.mean_y))
            .collect();
        Ok(PosteriorGM {
            estimator: self,
            responsibilities,
            means,
        })
    }

    /// The MMSE estimate `E[x | y] = Σ α_kl(y) u_x|y,kl`.
    pub fn mmse_estimate(&self, y: &DVector<T>) -> Result<DVector<T>> {
        Ok(self.posterior(y)?.mean())
    }
}

/// `f(x | y) = Σ α_kl(y) N(x; u_x|y,kl, C_x|y,kl)`. Component covariances are
/// borrowed from the estimator since they do not depend on `y`.
#[derive(Debug, Clone)]
pub struct PosteriorGM<'a, T: Scalar> {
    estimator: &'a PrecomputedEstimator<T>,
    responsibilities: Vec<T>,
    means: Vec<DVector<T>>,
}

impl<'a, T: Scalar> PosteriorGM<'a, T> {
    pub fn responsibilities(&self) -> &[T] {
        &self.responsibilities
    }

    pub fn component_means(&self) -> &[DVector<T>] {
        &self.means
    }

    pub fn component_covariance(&self, pair: usize) -> &'a DMatrix<T> {
        &self.estimator.pairs[pair].posterior_covariance
    }

    pub fn mean(&self) -> DVector<T> {
        self.responsibilities
            .iter()
            .zip(&self.means)
            .fold(DVector::zeros(self.estimator.x_dim), |acc, (&a, m)| acc + m * a)
    }

    /// `Σ α (C_kl + u_kl u_klᵀ) − u uᵀ`, accumulated centered on `u` so the
    /// result stays PSD.
    pub fn covariance(&self) -> DMatrix<T> {
        let mean = self.mean();
        let d = self.estimator.x_dim;
        let mut cov = DMatrix::zeros(d, d);
        for (i, (&a, m)) in self.responsibilities.iter().zip(&self.means).enumerate() {
            let centered = m - &mean;
            cov += (self.component_covariance(i) + &centered * centered.transpose()) * a;
        }
        symmetrize(&cov)
    }

    /// Log-density of the posterior at `x`. Fails if a component posterior
    /// covariance is singular (noise-free limit).
    pub fn log_density(&self, x: &DVector<T>) -> Result<T> {
        let mut terms = Vec::with_capacity(self.means.len());
        for (i, (&a, m)) in self.responsibilities.iter().zip(&self.means).enumerate() {
            if a == T::zero() {
                continue;
            }
            let factor = cholesky(self.component_covariance(i))
                .ok_or(Error::NotPositiveDefinite { index: i })?
                .unpack();
            terms.push(a.ln() + gaussian_log_density(&factor, log_det_from_factor(&factor), m, x));
        }
        Ok(crate::scalar::log_sum_exp(&terms))
    }
}

/// The affine estimator `u_x + C_xx Hᵀ (H C_xx Hᵀ + C_nn)⁻¹ (y − H u_x − u_n)`
/// built from the full mixture moments.
#[derive(Debug, Clone)]
pub struct LmmseEstimator<T: Scalar> {
    mean_x: DVector<T>,
    mean_y: DVector<T>,
    gain: DMatrix<T>,
}

impl<T: Scalar> LmmseEstimator<T> {
    pub fn new(model: &BayesianLinearModel<T>) -> Result<Self> {
        let h = model.h();
        let cxx = model.x_prior().covariance();
        let mean_x = model.x_prior().mean();
        let cross = h * &cxx;
        let innovation = symmetrize(&(&cross * h.transpose() + model.noise().covariance()));
        let chol = cholesky(&innovation).ok_or(Error::SingularInnovation)?;
        let gain = chol.solve(&cross).transpose();
        Ok(Self {
            mean_y: h * &mean_x + model.noise().mean(),
            mean_x,
            gain,
        })
    }

    pub fn estimate(&self, y: &DVector<T>) -> Result<DVector<T>> {
        if y.len() != self.mean_y.len() {
            return Err(Error::Shape {
                what: "observation",
                expected: self.mean_y.len(),
                found: y.len(),
            });
        }
        Ok(&self.mean_x + &self.gain * (y - &self.mean_y))
    }
}

pub fn lmmse_estimate<T: Scalar>(model: &BayesianLinearModel<T>, y: &DVector<T>) -> Result<DVector<T>> {
    LmmseEstimator::new(model)?.estimate(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::GaussianComponent;
    use nalgebra::{dmatrix, dvector};

    fn scalar_gaussian_model() -> BayesianLinearModel<f64> {
        BayesianLinearModel::new(
            dmatrix![1.0],
            GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap(),
            GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap(),
        )
        .unwrap()
    }

    fn symmetric_pair(c: f64) -> BayesianLinearModel<f64> {
        BayesianLinearModel::new(
            dmatrix![1.0],
            GaussianMixture::new(vec![
                GaussianComponent::new(0.5, dvector![-c], dmatrix![1.0]),
                GaussianComponent::new(0.5, dvector![c], dmatrix![1.0]),
            ])
            .unwrap(),
            GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn scalar_wiener_case() {
        let pre = PrecomputedEstimator::new(&scalar_gaussian_model()).unwrap();
        assert_eq!(pre.pairs().len(), 1);
        assert!((pre.pairs()[0].gain[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((pre.pairs()[0].posterior_covariance[(0, 0)] - 0.5).abs() < 1e-15);
        assert_eq!(pre.responsibilities(&dvector![3.0]).unwrap(), vec![1.0]);
        assert!((pre.mmse_estimate(&dvector![2.0]).unwrap()[0] - 1.0).abs() < 1e-15);
        let post = pre.posterior(&dvector![2.0]).unwrap();
        assert!((post.covariance()[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetric_prior_splits_evenly_at_zero() {
        let pre = PrecomputedEstimator::new(&symmetric_pair(3.0)).unwrap();
        let a = pre.responsibilities(&dvector![0.0]).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-15 && (a[1] - 0.5).abs() < 1e-15);
        assert!(pre.mmse_estimate(&dvector![0.0]).unwrap()[0].abs() < 1e-15);
    }

    #[test]
    fn far_separated_components_select_one() {
        // Observation std is √2; means 100 std apart.
        let c = 50.0 * 2f64.sqrt();
        let pre = PrecomputedEstimator::new(&symmetric_pair(c)).unwrap();
        let a = pre.responsibilities(&dvector![c]).unwrap();
        assert!((a[1] - 1.0).abs() < 1e-12);
        assert!(a[0] >= 0.0 && a[0] < 1e-300);
    }

    #[test]
    fn responsibilities_normalize_for_huge_observations() {
        let pre = PrecomputedEstimator::new(&symmetric_pair(3.0)).unwrap();
        for y in [1e3, -1e5, 1e6] {
            let s: f64 = pre.responsibilities(&dvector![y]).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn posterior_covariances_do_not_depend_on_y() {
        let pre = PrecomputedEstimator::new(&symmetric_pair(2.0)).unwrap();
        let p1 = pre.posterior(&dvector![-4.0]).unwrap();
        let p2 = pre.posterior(&dvector![7.0]).unwrap();
        for i in 0..2 {
            assert_eq!(p1.component_covariance(i), p2.component_covariance(i));
        }
    }

    #[test]
    fn posterior_trace_dominates_weighted_component_traces() {
        let pre = PrecomputedEstimator::new(&symmetric_pair(1.5)).unwrap();
        for y in [-3.0, -0.4, 0.0, 2.2] {
            let post = pre.posterior(&dvector![y]).unwrap();
            let within: f64 = post
                .responsibilities()
                .iter()
                .enumerate()
                .map(|(i, a)| a * post.component_covariance(i).trace())
                .sum();
            assert!(post.covariance().trace() >= within - 1e-15);
        }
    }

    #[test]
    fn posterior_mean_is_mmse_estimate_exactly() {
        let pre = PrecomputedEstimator::new(&symmetric_pair(1.5)).unwrap();
        let y = dvector![0.7];
        assert_eq!(pre.posterior(&y).unwrap().mean(), pre.mmse_estimate(&y).unwrap());
    }

    #[test]
    fn lmmse_examples() {
        let m = scalar_gaussian_model();
        let pre = PrecomputedEstimator::new(&m).unwrap();
        for y in [-2.0, 0.3, 5.0] {
            let y = dvector![y];
            assert!((lmmse_estimate(&m, &y).unwrap() - pre.mmse_estimate(&y).unwrap()).norm() < 1e-15);
        }
        let m = symmetric_pair(2.0);
        let y0 = m.h() * m.x_prior().mean() + m.noise().mean();
        assert!((lmmse_estimate(&m, &y0).unwrap() - m.x_prior().mean()).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let pre = PrecomputedEstimator::new(&scalar_gaussian_model()).unwrap();
        assert!(matches!(pre.mmse_estimate(&dvector![1.0, 2.0]), Err(Error::Shape { .. })));
    }

    #[test]
    fn identity_mixture_posterior_covariance_closed_form() {
        // H = I₅, C_k = I, noise βI  ⇒  C_x|y = β/(1+β) I.
        let beta = 0.3;
        let comps = (0..4)
            .map(|k| GaussianComponent::new(0.25, DVector::from_element(5, k as f64 * 10.0), DMatrix::identity(5, 5)))
            .collect();
        let model = BayesianLinearModel::new(
            DMatrix::identity(5, 5),
            GaussianMixture::new(comps).unwrap(),
            GaussianMixture::gaussian(DVector::zeros(5), DMatrix::identity(5, 5) * beta).unwrap(),
        )
        .unwrap();
        let pre = PrecomputedEstimator::new(&model).unwrap();
        assert_eq!(pre.pairs().len(), 4);
        let expected = DMatrix::<f64>::identity(5, 5) * (beta / (1.0 + beta));
        for p in pre.pairs() {
            assert!((&p.posterior_covariance - &expected).abs().max() < 1e-15);
        }
    }

    #[test]
    fn single_precision_estimator() {
        let m = BayesianLinearModel::<f32>::new(
            dmatrix![1.0],
            GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap(),
            GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap(),
        )
        .unwrap();
        let pre = PrecomputedEstimator::new(&m).unwrap();
        assert!((pre.mmse_estimate(&dvector![2.0]).unwrap()[0] - 1.0).abs() < 1e-6);
    }
}
