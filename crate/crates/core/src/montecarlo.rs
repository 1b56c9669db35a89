//! Monte Carlo MSE estimation and the SNR sweep.
//!
//! Reproducibility contract: trials are split into fixed-size batches and
//! batch `b` draws from `ChaCha20Rng::seed_from_u64(seed)` on stream `b`.
//! Per-trial squared errors are stored in trial order and reduced serially
//! with compensated summation, so the result is bit-identical whether the
//! batches run on one thread or many.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::bounds::BoundsReport;
use crate::error::{Error, Result};
use crate::linear_model::BayesianLinearModel;
use crate::posterior::{LmmseEstimator, PrecomputedEstimator};
use crate::scalar::Scalar;

/// Trials per RNG stream.
pub const BATCH_SIZE: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Mmse,
    Lmmse,
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorKind::Mmse => "mmse",
            EstimatorKind::Lmmse => "lmmse",
        })
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mmse" => Ok(EstimatorKind::Mmse),
            "lmmse" => Ok(EstimatorKind::Lmmse),
            other => Err(Error::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

/// Sample mean of `‖x − x̂‖²` and the standard error of that mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseEstimate<T: Scalar> {
    pub mse: T,
    pub stderr: T,
    pub trials: usize,
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy)]
struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Scalar> CompensatedSum<T> {
    fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.compensation
    }
}

fn summarize<T: Scalar>(errors: &[T]) -> MseEstimate<T> {
    let n = T::cast(errors.len() as f64);
    let mut total = CompensatedSum::new();
    errors.iter().for_each(|&e| total.add(e));
    let mean = total.value() / n;
    let mut squares = CompensatedSum::new();
    errors.iter().for_each(|&e| squares.add((e - mean) * (e - mean)));
    let variance = squares.value() / (n - T::one());
    MseEstimate {
        mse: mean,
        stderr: (variance / n).sqrt(),
        trials: errors.len(),
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sweep point `index`: `splitmix64(seed ^ splitmix64(index))`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

/// Runs `trials` paired trials: each trial draws `x` and `n` once and scores
/// every requested estimator on the same `y = H x + n`. Returns one estimate
/// per entry of `estimators`, in order.
pub fn estimate_mse_paired<T: Scalar>(
    model: &BayesianLinearModel<T>,
    trials: usize,
    seed: u64,
    estimators: &[EstimatorKind],
) -> Result<Vec<MseEstimate<T>>> {
    if trials < 2 {
        return Err(Error::Sweep(format!("need at least 2 trials, got {trials}")));
    }
    let mmse = if estimators.contains(&EstimatorKind::Mmse) {
        Some(PrecomputedEstimator::new(model)?)
    } else {
        None
    };
    let lmmse = if estimators.contains(&EstimatorKind::Lmmse) {
        Some(LmmseEstimator::new(model)?)
    } else {
        None
    };
    let width = estimators.len();
    let batches = trials.div_ceil(BATCH_SIZE);

    let per_batch: Vec<Vec<T>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BATCH_SIZE.min(trials - b * BATCH_SIZE);
            let mut out = Vec::with_capacity(count * width);
            for _ in 0..count {
                let x = model.x_prior().draw(&mut rng);
                let n = model.noise().draw(&mut rng);
                let y: DVector<T> = model.h() * &x + n;
                for kind in estimators {
                    let estimate = match kind {
                        EstimatorKind::Mmse => mmse.as_ref().expect("built above").mmse_estimate(&y),
                        EstimatorKind::Lmmse => lmmse.as_ref().expect("built above").estimate(&y),
                    }
                    .expect("y has the model's observation dimension");
                    out.push((&x - estimate).norm_squared());
                }
            }
            out
        })
        .collect();

    Ok((0..width)
        .map(|e| {
            let errors: Vec<T> = per_batch
                .iter()
                .flat_map(|batch| batch.iter().skip(e).step_by(width.max(1)).copied())
                .collect();
            summarize(&errors)
        })
        .collect())
}

pub fn estimate_mse<T: Scalar>(
    model: &BayesianLinearModel<T>,
    trials: usize,
    seed: u64,
    estimator: EstimatorKind,
) -> Result<MseEstimate<T>> {
    Ok(estimate_mse_paired(model, trials, seed, &[estimator])?[0])
}

#[derive(Debug, Clone)]
pub struct SweepConfig<T: Scalar> {
    /// Model whose noise mixture is the unit-scale reference; each point
    /// rescales it.
    pub model: BayesianLinearModel<T>,
    pub snr_db_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
}

impl<T: Scalar> SweepConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 2 {
            return Err(Error::Sweep(format!("need at least 2 trials, got {}", self.trials)));
        }
        if self.snr_db_grid.is_empty() {
            return Err(Error::Sweep("empty SNR grid".into()));
        }
        if let Some(bad) = self.snr_db_grid.iter().find(|v| !v.is_finite()) {
            return Err(Error::Sweep(format!("non-finite SNR grid value {bad}")));
        }
        Ok(())
    }
}

/// `start, start + step, …` up to and including `stop` (within half a step).
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop >= start, "grid must be increasing");
    let n = ((stop - start) / step + 0.5).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T: Scalar> {
    pub snr_db: f64,
    /// Noise scale `a`; `None` if calibration itself failed.
    pub noise_scale: Option<T>,
    pub mmse: Option<MseEstimate<T>>,
    pub lmmse: Option<MseEstimate<T>>,
    pub bounds: Option<BoundsReport<T>>,
    pub failure: Option<String>,
}

impl<T: Scalar> SweepPoint<T> {
    pub fn estimate(&self, kind: EstimatorKind) -> Option<&MseEstimate<T>> {
        match kind {
            EstimatorKind::Mmse => self.mmse.as_ref(),
            EstimatorKind::Lmmse => self.lmmse.as_ref(),
        }
    }
}

fn run_point<T: Scalar>(config: &SweepConfig<T>, index: usize, snr_db: f64) -> SweepPoint<T> {
    let mut point = SweepPoint {
        snr_db,
        noise_scale: None,
        mmse: None,
        lmmse: None,
        bounds: None,
        failure: None,
    };
    let calibrated = match config.model.calibrate_noise_scale(snr_db) {
        Ok(c) => c,
        Err(e) => {
            point.failure = Some(e.to_string());
            return point;
        }
    };
    point.noise_scale = Some(calibrated.scale);
    let model = &calibrated.model;
    let outcome = PrecomputedEstimator::new(model)
        .and_then(|pre| BoundsReport::compute(model, &pre))
        .and_then(|bounds| {
            point.bounds = Some(bounds);
            if config.estimators.is_empty() {
                return Ok(Vec::new());
            }
            estimate_mse_paired(model, config.trials, point_seed(config.seed, index), &config.estimators)
        });
    match outcome {
        Ok(estimates) => {
            for (kind, est) in config.estimators.iter().zip(estimates) {
                match kind {
                    EstimatorKind::Mmse => point.mmse = Some(est),
                    EstimatorKind::Lmmse => point.lmmse = Some(est),
                }
            }
        }
        Err(e) => point.failure = Some(e.to_string()),
    }
    point
}

/// Runs every grid point: calibrate, precompute, bounds, then the paired
/// Monte Carlo. A failing point is recorded and the sweep continues.
pub fn run_sweep<T: Scalar>(config: &SweepConfig<T>) -> Result<Vec<SweepPoint<T>>> {
    config.validate()?;
    let mut estimators: Vec<EstimatorKind> = Vec::new();
    for &kind in &config.estimators {
        if !estimators.contains(&kind) {
            estimators.push(kind);
        }
    }
    let config = SweepConfig {
        estimators,
        ..config.clone()
    };
    Ok(config
        .snr_db_grid
        .par_iter()
        .enumerate()
        .map(|(i, &snr)| run_point(&config, i, snr))
        .collect())
}
