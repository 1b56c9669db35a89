//! Minimum mean square error estimation for the Bayesian linear model
//! `y = H x + n` when `x` and `n` are independent finite Gaussian mixtures.
//!
//! The posterior `f(x | y)` is again a Gaussian mixture, so the MMSE estimate
//! has a closed form: a responsibility-weighted sum of per-component Wiener
//! estimates. Its MSE has no closed form but is bracketed by a genie-aided
//! lower bound and the LMMSE error, both computable exactly.
//!
//! * [`mixture`]: Gaussian mixtures, moments, densities, sampling and the
//!   affine/join/marginal closure operations.
//! * [`linear_model`]: the model, observation and joint mixtures, SNR.
//! * [`posterior`]: precomputed MMSE estimator, posterior mixture, LMMSE.
//! * [`bounds`]: lower and upper MSE bounds.
//! * [`montecarlo`]: empirical MSE and SNR sweeps.
//! * [`oracle`]: quadrature reference for scalar models.
//! * [`config`] and [`report`]: config files, CSV and SVG output.
//!
//! All numeric code is generic over [`Scalar`] (`f32`, `f64`); the aliases
//! below fix the scalar to `f64`, which is what the CLI uses.
//!
//! ```
//! use gm_mmse::{GaussianMixture, LinearModel, Estimator};
//! use nalgebra::{dmatrix, dvector};
//!
//! let x = GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap();
//! let n = GaussianMixture::gaussian(dvector![0.0], dmatrix![1.0]).unwrap();
//! let model = LinearModel::new(dmatrix![1.0], x, n).unwrap();
//! let estimator = Estimator::new(&model).unwrap();
//! let x_hat = estimator.mmse_estimate(&dvector![2.0]).unwrap();
//! assert!((x_hat[0] - 1.0).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod config;
pub mod error;
pub mod linear_model;
pub mod mixture;
pub mod montecarlo;
pub mod oracle;
pub mod posterior;
pub mod report;
pub mod scalar;

pub use bounds::{genie_lower_bound, lmmse_upper_bound, loose_upper_bound, BoundsReport};
pub use error::{Error, Result};
pub use linear_model::{to_db, BayesianLinearModel, CalibratedModel};
pub use mixture::GaussianComponent;
pub use montecarlo::{estimate_mse, estimate_mse_paired, run_sweep, EstimatorKind, MseEstimate, SweepConfig, SweepPoint};
pub use posterior::{lmmse_estimate, LmmseEstimator, PosteriorGM, PrecomputedEstimator};
pub use scalar::Scalar;

pub type Vector = nalgebra::DVector<f64>;
pub type Matrix = nalgebra::DMatrix<f64>;
pub type GaussianMixture = mixture::GaussianMixture<f64>;
pub type Component = mixture::GaussianComponent<f64>;
pub type LinearModel = linear_model::BayesianLinearModel<f64>;
pub type Estimator = posterior::PrecomputedEstimator<f64>;
pub type Bounds = bounds::BoundsReport<f64>;
pub type Sweep = montecarlo::SweepConfig<f64>;
pub type Point = montecarlo::SweepPoint<f64>;
