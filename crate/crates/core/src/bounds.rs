//! Analytic bounds on the MSE of the MMSE estimator.
//!
//! Writing the MSE matrix as `M = M₁ + M₂ + M₃`:
//!
//! * `M₁ = Σ p_k q_l C_x|y,kl` is the error of a genie that reveals the true
//!   `(k, l)` pair, so `Tr(M₁)` is a lower bound.
//! * `M₁ + M₂ = Σ p_k (C_k + u_k u_kᵀ)` gives the loose upper bound.
//! * `M₃ = −∫ u_x|y u_x|yᵀ f(y) dy` has no closed form; it only shows up
//!   through the empirical MSE in [`crate::montecarlo`].
//!
//! The LMMSE error `ε²_L` is the tighter upper bound, and
//! `Tr(M₁) ≤ ε²_L ≤ Tr(C_xx) ≤ Tr(M₁ + M₂)`.

use crate::error::{Error, Result};
use crate::linear_model::{to_db, BayesianLinearModel};
use crate::mixture::{cholesky, symmetrize};
use crate::posterior::PrecomputedEstimator;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport<T: Scalar> {
    /// `Tr(M₁)`
    pub lower: T,
    /// `ε²_L`
    pub upper: T,
    /// `Tr(M₁) + Tr(M₂)`
    pub loose_upper: T,
    /// `Tr(C_xx)`
    pub trace_prior: T,
}

impl<T: Scalar> BoundsReport<T> {
    pub fn compute(model: &BayesianLinearModel<T>, pre: &PrecomputedEstimator<T>) -> Result<Self> {
        Ok(Self {
            lower: genie_lower_bound(pre),
            upper: lmmse_upper_bound(model)?,
            loose_upper: loose_upper_bound(pre),
            trace_prior: model.x_prior().covariance().trace(),
        })
    }

    pub fn lower_db(&self) -> T {
        to_db(self.lower)
    }

    pub fn upper_db(&self) -> T {
        to_db(self.upper)
    }
}

/// `Σ_{k,l} p_k q_l Tr(C_x|y,kl)`.
pub fn genie_lower_bound<T: Scalar>(pre: &PrecomputedEstimator<T>) -> T {
    pre.pairs()
        .iter()
        .fold(T::zero(), |acc, p| acc + p.weight * p.posterior_covariance.trace())
}

/// `ε²_L = Tr(C_xx) − Σ_j g_jᵀ S⁻¹ g_j`, with `g_j` the columns of `H C_xx`
/// and `S = H C_xx Hᵀ + C_nn`.
pub fn lmmse_upper_bound<T: Scalar>(model: &BayesianLinearModel<T>) -> Result<T> {
    let h = model.h();
    let cxx = model.x_prior().covariance();
    let g = h * &cxx;
    let s = symmetrize(&(&g * h.transpose() + model.noise().covariance()));
    let chol = cholesky(&s).ok_or(Error::SingularInnovation)?;
    let solved = chol.solve(&g);
    Ok(cxx.trace() - g.component_mul(&solved).sum())
}

/// `Σ_k p_k (Tr C_k + ‖u_k‖²)`.
pub fn loose_upper_bound<T: Scalar>(pre: &PrecomputedEstimator<T>) -> T {
    pre.x_prior().second_moment()
}
