#![allow(dead_code)]

use gm_mmse::{BayesianLinearModel, GaussianComponent, GaussianMixture, Matrix, Vector};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> Matrix {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn normal_vector(rng: &mut ChaCha20Rng, n: usize, scale: f64) -> Vector {
    DVector::from_fn(n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// Symmetric positive definite with eigenvalues roughly in `[floor, floor + 3]`
/// times `scale`.
pub fn spd(rng: &mut ChaCha20Rng, d: usize, scale: f64, floor: f64) -> Matrix {
    let a = normal_matrix(rng, d, d) / (d as f64).sqrt();
    let s = &a * a.transpose() + Matrix::identity(d, d) * floor;
    (&s + s.transpose()) * (0.5 * scale)
}

pub fn random_weights(rng: &mut ChaCha20Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

pub fn random_mixture(rng: &mut ChaCha20Rng, d: usize, k: usize, mean_scale: f64, cov_scale: f64) -> GaussianMixture {
    let weights = random_weights(rng, k);
    let components = weights
        .into_iter()
        .map(|w| {
            let mean = normal_vector(rng, d, mean_scale);
            let cov = spd(rng, d, cov_scale, 0.3);
            GaussianComponent::new(w, mean, cov)
        })
        .collect();
    GaussianMixture::new(components).unwrap()
}

pub fn random_model(rng: &mut ChaCha20Rng, d: usize, m: usize, k: usize, l: usize) -> BayesianLinearModel<f64> {
    let h = normal_matrix(rng, m, d);
    let x = random_mixture(rng, d, k, 2.0, 1.0);
    let n = random_mixture(rng, m, l, 0.5, 0.5);
    BayesianLinearModel::new(h, x, n).unwrap()
}

/// Square, well-conditioned `H` and zero-mean noise components; the signal
/// mixture has means of size `mean_scale` and covariances of size `cov_scale`.
pub fn random_invertible_model(
    rng: &mut ChaCha20Rng,
    d: usize,
    k: usize,
    l: usize,
    mean_scale: f64,
    cov_scale: f64,
) -> BayesianLinearModel<f64> {
    let h = Matrix::identity(d, d) + normal_matrix(rng, d, d) * (0.3 / (d as f64).sqrt());
    let x = random_mixture(rng, d, k, mean_scale, cov_scale);
    let noise_weights = random_weights(rng, l);
    let noise = GaussianMixture::new(
        noise_weights
            .into_iter()
            .map(|w| GaussianComponent::new(w, Vector::zeros(d), spd(rng, d, 1.0, 0.3)))
            .collect(),
    )
    .unwrap();
    BayesianLinearModel::new(h, x, noise).unwrap()
}

fn scalar_mixture(rng: &mut ChaCha20Rng, k: usize, mean_range: f64, var_lo: f64, var_hi: f64) -> GaussianMixture {
    let weights = random_weights(rng, k);
    GaussianMixture::new(
        weights
            .into_iter()
            .map(|w| {
                GaussianComponent::new(
                    w,
                    nalgebra::dvector![rng.random_range(-mean_range..mean_range)],
                    nalgebra::dmatrix![rng.random_range(var_lo..var_hi)],
                )
            })
            .collect(),
    )
    .unwrap()
}

/// Random 1-D model with `k` signal and `l` noise components.
pub fn random_scalar_model(rng: &mut ChaCha20Rng, k: usize, l: usize) -> BayesianLinearModel<f64> {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let h = sign * rng.random_range(0.5..2.0);
    BayesianLinearModel::new(
        nalgebra::dmatrix![h],
        scalar_mixture(rng, k, 3.0, 0.2, 3.0),
        scalar_mixture(rng, l, 1.0, 0.1, 2.0),
    )
    .unwrap()
}

pub fn scalar_gaussian_model(h: f64, var_x: f64, var_n: f64) -> BayesianLinearModel<f64> {
    BayesianLinearModel::new(
        nalgebra::dmatrix![h],
        GaussianMixture::gaussian(nalgebra::dvector![0.0], nalgebra::dmatrix![var_x]).unwrap(),
        GaussianMixture::gaussian(nalgebra::dvector![0.0], nalgebra::dmatrix![var_n]).unwrap(),
    )
    .unwrap()
}

/// Four unit-covariance components with the published 5-D means, `H = I`,
/// unit Gaussian noise.
pub fn figure1_model() -> BayesianLinearModel<f64> {
    let means = [
        [35.381, -20.184, -6.377, 24.419, 38.891],
        [-47.087, 0.286, -68.308, 4.400, 1.195],
        [79.522, -51.577, -17.330, -7.422, 9.282126],
        [-30.903, -5.826, 3.246, -101.586, -0.047508],
    ];
    let x = GaussianMixture::new(
        means
            .iter()
            .map(|m| GaussianComponent::new(0.25, DVector::from_row_slice(m), Matrix::identity(5, 5)))
            .collect(),
    )
    .unwrap();
    let n = GaussianMixture::gaussian(Vector::zeros(5), Matrix::identity(5, 5)).unwrap();
    BayesianLinearModel::new(Matrix::identity(5, 5), x, n).unwrap()
}

pub fn rel_err(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm()
}

/// Sample mean and the standard error of each coordinate.
pub fn sample_mean(samples: &[Vector]) -> (Vector, Vector) {
    let n = samples.len() as f64;
    let d = samples[0].len();
    let mean = samples.iter().fold(Vector::zeros(d), |acc, s| acc + s) / n;
    let var = samples
        .iter()
        .fold(Vector::zeros(d), |acc, s| acc + (s - &mean).map(|v| v * v))
        / (n - 1.0);
    (mean, var.map(|v| (v / n).sqrt()))
}

/// Sample covariance and the standard error of each entry, estimated from
/// the spread of the centered products.
pub fn sample_covariance(samples: &[Vector], mean: &Vector) -> (Matrix, Matrix) {
    let n = samples.len() as f64;
    let d = mean.len();
    let mut sum = Matrix::zeros(d, d);
    let mut sum_sq = Matrix::zeros(d, d);
    for s in samples {
        let c = s - mean;
        let outer = &c * c.transpose();
        sum_sq += outer.map(|v| v * v);
        sum += outer;
    }
    let cov = &sum / n;
    let var = (sum_sq / n - cov.map(|v| v * v)) / (n - 1.0);
    (cov, var.map(f64::sqrt))
}
