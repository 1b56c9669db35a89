//! The Bayesian linear model `y = H x + n` with independent Gaussian mixture
//! priors on `x` and `n`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mixture::{symmetrize, GaussianComponent, GaussianMixture};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BayesianLinearModel<T: Scalar> {
    h: DMatrix<T>,
    x_prior: GaussianMixture<T>,
    noise: GaussianMixture<T>,
}

/// A model whose noise was rescaled to hit a target SNR.
#[derive(Debug, Clone)]
pub struct CalibratedModel<T: Scalar> {
    pub model: BayesianLinearModel<T>,
    /// The scalar `a` with `n ~ a · noise_base`.
    pub scale: T,
    pub snr_db: f64,
}

impl<T: Scalar> BayesianLinearModel<T> {
    pub fn new(h: DMatrix<T>, x_prior: GaussianMixture<T>, noise: GaussianMixture<T>) -> Result<Self> {
        if h.ncols() != x_prior.dim() {
            return Err(Error::Shape {
                what: "H columns vs x dimension",
                expected: x_prior.dim(),
                found: h.ncols(),
            });
        }
        if h.nrows() != noise.dim() {
            return Err(Error::Shape {
                what: "H rows vs noise dimension",
                expected: noise.dim(),
                found: h.nrows(),
            });
        }
        if !h.iter().all(|v| v.is_finite()) {
            return Err(Error::Config("H has non-finite entries".into()));
        }
        Ok(Self { h, x_prior, noise })
    }

    pub fn h(&self) -> &DMatrix<T> {
        &self.h
    }

    pub fn x_prior(&self) -> &GaussianMixture<T> {
        &self.x_prior
    }

    pub fn noise(&self) -> &GaussianMixture<T> {
        &self.noise
    }

    pub fn x_dim(&self) -> usize {
        self.h.ncols()
    }

    pub fn y_dim(&self) -> usize {
        self.h.nrows()
    }

    /// Number of `(k, l)` pairs, `|K|·|L|`.
    pub fn pair_count(&self) -> usize {
        self.x_prior.len() * self.noise.len()
    }

    /// Mixture of `y` with components `(p_k q_l, H u_k + u_l, H C_k Hᵀ + C_l)`
    /// in row-major `(k, l)` order.
    pub fn observation_mixture(&self) -> Result<GaussianMixture<T>> {
        let mut components = Vec::with_capacity(self.pair_count());
        for xc in self.x_prior.components() {
            let hc = &self.h * &xc.covariance;
            let hu = &self.h * &xc.mean;
            for nc in self.noise.components() {
                components.push(GaussianComponent::new(
                    xc.weight * nc.weight,
                    &hu + &nc.mean,
                    symmetrize(&(&hc * self.h.transpose() + &nc.covariance)),
                ));
            }
        }
        GaussianMixture::new(components).map_err(|e| self.pair_error(e))
    }

    /// Mixture of the stacked vector `[y; x]`, obtained by pushing
    /// `[x; n]` through `[[H, I], [I, 0]]`.
    pub fn joint_xy_mixture(&self) -> Result<GaussianMixture<T>> {
        let (d, m) = (self.x_dim(), self.y_dim());
        let mut block = DMatrix::zeros(m + d, d + m);
        block.view_mut((0, 0), (m, d)).copy_from(&self.h);
        block.view_mut((0, d), (m, m)).fill_with_identity();
        block.view_mut((m, 0), (d, d)).fill_with_identity();
        self.x_prior
            .independent_join(&self.noise)
            .affine_transform(&block, &DVector::zeros(m + d))
            .map_err(|e| self.pair_error(e))
    }

    fn pair_error(&self, e: Error) -> Error {
        match e {
            Error::NotPositiveDefinite { index } => Error::ObservationCovariance {
                k: index / self.noise.len(),
                l: index % self.noise.len(),
            },
            other => other,
        }
    }

    /// `E‖x‖² / E‖n‖²` from full second moments (trace plus squared mean).
    pub fn snr(&self) -> Result<T> {
        let noise_power = self.noise.second_moment();
        if noise_power <= T::zero() {
            return Err(Error::ZeroNoisePower);
        }
        Ok(self.x_prior.second_moment() / noise_power)
    }

    /// Same model with the noise replaced by `a · n`.
    pub fn with_noise_scale(&self, a: T) -> Result<Self> {
        Ok(Self {
            h: self.h.clone(),
            x_prior: self.x_prior.clone(),
            noise: self.noise.scaled(a)?,
        })
    }

    /// Scales the noise by the `a > 0` that gives `snr = 10^(target_db/10)`.
    /// Because means scale with `a` too, `E‖a n‖² = a² E‖n‖²` and
    /// `a = sqrt(E‖x‖² / (snr · E‖n‖²))`.
    pub fn calibrate_noise_scale(&self, target_snr_db: f64) -> Result<CalibratedModel<T>> {
        if !target_snr_db.is_finite() {
            return Err(Error::NonFiniteSnr(target_snr_db));
        }
        let noise_power = self.noise.second_moment();
        if noise_power <= T::zero() {
            return Err(Error::ZeroNoisePower);
        }
        let target = T::cast(10f64.powf(target_snr_db / 10.0));
        let scale = (self.x_prior.second_moment() / (target * noise_power)).sqrt();
        Ok(CalibratedModel {
            model: self.with_noise_scale(scale)?,
            scale,
            snr_db: target_snr_db,
        })
    }
}

/// `10 · log10(value)`.
pub fn to_db<T: Scalar>(value: T) -> T {
    value.log10() * T::cast(10.0)
}
