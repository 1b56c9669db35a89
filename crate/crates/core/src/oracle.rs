//! Brute-force posterior statistics for one-dimensional models.
//!
//! Everything here integrates `f(y | x) f(x)` on a uniform grid with the
//! trapezoidal rule, working directly from the scalar mixture parameters. No
//! gains, responsibilities or component posteriors from
//! [`crate::posterior`] are used, which is what makes these routines usable
//! as an independent check on the analytic estimator.

use crate::error::{Error, Result};
use crate::linear_model::BayesianLinearModel;
use crate::posterior::PrecomputedEstimator;
use crate::scalar::Scalar;
use rayon::prelude::*;

const LN_TINY: f64 = -690.775_527_898_213_7; // ln(1e-300)

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Points of the grid over `x`.
    pub grid_points: usize,
    /// Half-width of the grids in component standard deviations.
    pub span_sigmas: f64,
    /// Points of the outer grid over `y` used by [`quad_mse`].
    pub outer_grid_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            grid_points: 20_001,
            span_sigmas: 12.0,
            outer_grid_points: 1_001,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 1001 || self.grid_points % 2 == 0 {
            return Err(Error::Quadrature("grid_points must be odd and at least 1001"));
        }
        if self.outer_grid_points < 101 || self.outer_grid_points % 2 == 0 {
            return Err(Error::Quadrature("outer_grid_points must be odd and at least 101"));
        }
        if !(self.span_sigmas >= 8.0) {
            return Err(Error::Quadrature("span_sigmas must be at least 8"));
        }
        Ok(())
    }

    /// Same spec with the inner grid spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            grid_points: 2 * self.grid_points - 1,
            ..*self
        }
    }
}

/// Scalar component `(weight, mean, variance)`.
type Scalar1 = (f64, f64, f64);

/// Parameters of a model with `d = m = 1`, in `f64`.
#[derive(Debug, Clone)]
struct ScalarModel {
    h: f64,
    x: Vec<Scalar1>,
    n: Vec<Scalar1>,
}

impl ScalarModel {
    fn from_model<T: Scalar>(model: &BayesianLinearModel<T>) -> Result<Self> {
        if model.x_dim() != 1 || model.y_dim() != 1 {
            return Err(Error::NotScalarModel {
                d: model.x_dim(),
                m: model.y_dim(),
            });
        }
        let params = |m: &crate::mixture::GaussianMixture<T>| {
            m.components()
                .iter()
                .map(|c| (c.weight.as_f64(), c.mean[0].as_f64(), c.covariance[(0, 0)].as_f64()))
                .collect()
        };
        Ok(Self {
            h: model.h()[(0, 0)].as_f64(),
            x: params(model.x_prior()),
            n: params(model.noise()),
        })
    }

    /// Hull of the prior span and of the likelihood span for every noise
    /// component at both ends of `[y_lo, y_hi]`, so the grid also follows the
    /// posterior when an observation pulls it into the prior tail.
    fn x_range(&self, span: f64, (y_lo, y_hi): (f64, f64)) -> (f64, f64) {
        let (lo, hi) = span_of(self.x.iter().map(|&(_, m, v)| (m, v)), span);
        let h2 = self.h * self.h;
        let likelihood = self
            .n
            .iter()
            .flat_map(|&(_, m, v)| [y_lo, y_hi].map(|y| ((y - m) / self.h, v / h2)));
        let (l_lo, l_hi) = span_of(likelihood, span);
        (lo.min(l_lo), hi.max(l_hi))
    }

    fn y_range(&self, span: f64) -> (f64, f64) {
        let pairs = self.x.iter().flat_map(|&(_, mx, vx)| {
            self.n
                .iter()
                .map(move |&(_, mn, vn)| (self.h * mx + mn, self.h * self.h * vx + vn))
        });
        span_of(pairs, span)
    }
}

fn span_of(components: impl Iterator<Item = (f64, f64)>, span: f64) -> (f64, f64) {
    components.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (m, v)| {
        let s = span * v.sqrt();
        (lo.min(m - s), hi.max(m + s))
    })
}

fn log_normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let r = x - mean;
    -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + r * r / var)
}

fn log_mixture_pdf(x: f64, comps: &[Scalar1]) -> f64 {
    let terms: Vec<f64> = comps
        .iter()
        .filter(|c| c.0 > 0.0)
        .map(|&(w, m, v)| w.ln() + log_normal_pdf(x, m, v))
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn mixture_pdf(x: f64, comps: &[Scalar1]) -> f64 {
    comps
        .iter()
        .map(|&(w, m, v)| {
            let r = x - m;
            w * (-0.5 * r * r / v).exp() / (2.0 * std::f64::consts::PI * v).sqrt()
        })
        .sum()
}

/// Uniform grid with trapezoid weights (step included).
struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    fn new(lo: f64, hi: f64, points: usize) -> Self {
        let step = (hi - lo) / (points - 1) as f64;
        let nodes = (0..points).map(|i| lo + step * i as f64).collect();
        let weights = (0..points)
            .map(|i| if i == 0 || i == points - 1 { 0.5 * step } else { step })
            .collect();
        Self { nodes, weights }
    }
}

/// Posterior moments of `x` given a scalar observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadMoments {
    pub mean: f64,
    pub variance: f64,
    /// `ln f(y)` as integrated on the grid.
    pub log_evidence: f64,
}

struct Prepared {
    model: ScalarModel,
    grid: Grid,
    log_prior: Vec<f64>,
}

impl Prepared {
    /// Grid suited to observations in `ys = (lo, hi)`; `None` uses the span
    /// of the observation density.
    fn new<T: Scalar>(model: &BayesianLinearModel<T>, spec: &QuadratureSpec, ys: Option<(f64, f64)>) -> Result<Self> {
        spec.validate()?;
        let model = ScalarModel::from_model(model)?;
        let ys = ys.unwrap_or_else(|| model.y_range(spec.span_sigmas));
        let (lo, hi) = model.x_range(spec.span_sigmas, ys);
        let grid = Grid::new(lo, hi, spec.grid_points);
        let log_prior = grid.nodes.iter().map(|&x| log_mixture_pdf(x, &model.x)).collect();
        Ok(Self { model, grid, log_prior })
    }

    fn moments(&self, y: f64) -> Result<QuadMoments> {
        let logs: Vec<f64> = self
            .grid
            .nodes
            .iter()
            .zip(&self.log_prior)
            .map(|(&x, &lp)| lp + log_mixture_pdf(y - self.model.h * x, &self.model.n))
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (mut z, mut s1) = (0.0, 0.0);
        for ((&x, &w), &l) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&logs) {
            let f = w * (l - max).exp();
            z += f;
            s1 += f * x;
        }
        let log_evidence = max + z.ln();
        if !(log_evidence > LN_TINY) {
            return Err(Error::OutsideSupport { y });
        }
        let mean = s1 / z;
        let mut s2 = 0.0;
        for ((&x, &w), &l) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&logs) {
            s2 += w * (l - max).exp() * (x - mean) * (x - mean);
        }
        Ok(QuadMoments {
            mean,
            variance: s2 / z,
            log_evidence,
        })
    }
}

/// Posterior mean and variance of `x` given `y` by quadrature.
pub fn quad_posterior_moments<T: Scalar>(
    model: &BayesianLinearModel<T>,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<QuadMoments> {
    Prepared::new(model, spec, Some((y, y)))?.moments(y)
}

/// `∫ x f(y|x) f(x) dx / ∫ f(y|x) f(x) dx`.
pub fn quad_posterior_mean<T: Scalar>(model: &BayesianLinearModel<T>, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(quad_posterior_moments(model, y, spec)?.mean)
}

/// `f(y, x) / f(y)` with the evidence integrated on the grid.
pub fn quad_posterior_density<T: Scalar>(
    model: &BayesianLinearModel<T>,
    y: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let prepared = Prepared::new(model, spec, Some((y, y)))?;
    let m = prepared.moments(y)?;
    let log_joint = log_mixture_pdf(x, &prepared.model.x) + log_mixture_pdf(y - prepared.model.h * x, &prepared.model.n);
    Ok((log_joint - m.log_evidence).exp())
}

/// `∫ Var(x | y) f(y) dy` by nested quadrature, normalized by the integrated
/// evidence mass. Outer points where `f(y)` underflows contribute nothing.
pub fn quad_mse<T: Scalar>(model: &BayesianLinearModel<T>, spec: &QuadratureSpec) -> Result<f64> {
    let prepared = Prepared::new(model, spec, None)?;
    let prior: Vec<f64> = prepared.log_prior.iter().map(|l| l.exp()).collect();
    let (lo, hi) = prepared.model.y_range(spec.span_sigmas);
    let outer = Grid::new(lo, hi, spec.outer_grid_points);
    let h = prepared.model.h;
    let noise = &prepared.model.n;

    let terms: Vec<(f64, f64)> = outer
        .nodes
        .par_iter()
        .zip(outer.weights.par_iter())
        .map_init(
            || vec![0.0; prior.len()],
            |scratch, (&y, &wy)| {
                let (mut z, mut s1) = (0.0, 0.0);
                for (((&x, &wx), &p), f) in prepared.grid.nodes.iter().zip(&prepared.grid.weights).zip(&prior).zip(scratch.iter_mut()) {
                    *f = wx * p * mixture_pdf(y - h * x, noise);
                    z += *f;
                    s1 += *f * x;
                }
                if z < 1e-300 {
                    return (0.0, 0.0);
                }
                let mean = s1 / z;
                // centered second pass avoids E[x²] − E[x]² cancellation
                let var: f64 = prepared
                    .grid
                    .nodes
                    .iter()
                    .zip(scratch.iter())
                    .map(|(&x, &f)| f * (x - mean) * (x - mean))
                    .sum();
                (wy * z, wy * var)
            },
        )
        .collect();
    let (mass, total) = terms.iter().fold((0.0, 0.0), |(m, t), &(a, b)| (m + a, t + b));
    Ok(total / mass)
}

/// Outcome of comparing the analytic estimator with quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub max_mean_deviation: f64,
    pub worst_y: f64,
    pub observations: usize,
    pub quad_mse: Option<f64>,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl OracleReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        let inside = self
            .quad_mse
            .map_or(true, |v| v >= self.lower_bound - 1e-8 && v <= self.upper_bound + 1e-8);
        self.max_mean_deviation <= tolerance && inside
    }
}

/// `count` observations evenly spanning `±span` observation standard
/// deviations around the observation mean.
pub fn observation_grid<T: Scalar>(model: &BayesianLinearModel<T>, span: f64, count: usize) -> Result<Vec<f64>> {
    let y = model.observation_mixture()?;
    let mean = y.mean()[0].as_f64();
    let sd = y.covariance()[(0, 0)].as_f64().sqrt();
    Ok((0..count)
        .map(|i| mean - span * sd + 2.0 * span * sd * i as f64 / (count - 1) as f64)
        .collect())
}

/// Compares `estimator` against quadrature posterior means on `ys`, and
/// optionally checks `quad_mse` against the analytic bounds.
pub fn compare_with_quadrature<T: Scalar>(
    model: &BayesianLinearModel<T>,
    estimator: &PrecomputedEstimator<T>,
    ys: &[f64],
    spec: &QuadratureSpec,
    with_mse: bool,
) -> Result<OracleReport> {
    let range = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    let prepared = Prepared::new(model, spec, (!ys.is_empty()).then_some(range))?;
    let mut worst = (0.0_f64, f64::NAN);
    for &y in ys {
        let quad = prepared.moments(y)?.mean;
        let analytic = estimator.mmse_estimate(&nalgebra::dvector![T::cast(y)])?[0].as_f64();
        let dev = (quad - analytic).abs();
        if !(dev <= worst.0) {
            worst = (dev, y);
        }
    }
    let quad = if with_mse { Some(quad_mse(model, spec)?) } else { None };
    Ok(OracleReport {
        max_mean_deviation: worst.0,
        worst_y: worst.1,
        observations: ys.len(),
        quad_mse: quad,
        lower_bound: crate::bounds::genie_lower_bound(estimator).as_f64(),
        upper_bound: crate::bounds::lmmse_upper_bound(model)?.as_f64(),
    })
}
