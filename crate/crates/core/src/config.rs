//! Run configuration files.
//!
//! A config is a TOML document:
//!
//! ```toml
//! H = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [[x]]
//! weight = 0.5
//! mean = [-3.0, 0.0]
//! covariance = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [[x]]
//! weight = 0.5
//! mean = [3.0, 0.0]
//! covariance = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [[noise]]
//! weight = 1.0
//! mean = [0.0, 0.0]
//! covariance = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [sweep]                  # optional, needed by `sweep`
//! snr_start_db = -10.0
//! snr_stop_db = 50.0
//! snr_step_db = 1.0
//! trials = 50000
//! seed = 1
//! estimators = ["mmse", "lmmse"]
//!
//! [output]                 # optional defaults for `sweep`
//! csv = "sweep.csv"
//! svg = "sweep.svg"
//! ```
//!
//! `H` is given row by row; each mixture is an array of components. The
//! noise mixture is the unit-scale reference that sweeps rescale.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{GaussianComponent, GaussianMixture};
use crate::montecarlo::{snr_grid, EstimatorKind, SweepConfig};
use crate::BayesianLinearModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub trials: usize,
    pub seed: u64,
    pub estimators: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<String>,
    pub svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "H")]
    pub h: Vec<Vec<f64>>,
    pub x: Vec<ComponentSpec>,
    pub noise: Vec<ComponentSpec>,
    pub sweep: Option<SweepSpec>,
    pub output: Option<OutputSpec>,
}

fn matrix(field: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(Error::Config(format!("{field}: empty matrix")));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::Config(format!(
            "{field}: row {i} has {} entries, expected {cols}",
            rows[i].len()
        )));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn mixture(field: &str, specs: &[ComponentSpec]) -> Result<GaussianMixture<f64>> {
    let components = specs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(GaussianComponent::new(
                c.weight,
                DVector::from_vec(c.mean.clone()),
                matrix(&format!("{field}[{i}].covariance"), &c.covariance)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    GaussianMixture::new(components).map_err(|e| Error::Config(format!("{field}: {e}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn model(&self) -> Result<BayesianLinearModel<f64>> {
        let h = matrix("H", &self.h)?;
        let x = mixture("x", &self.x)?;
        let noise = mixture("noise", &self.noise)?;
        BayesianLinearModel::new(h, x, noise).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn estimators(&self) -> Result<Vec<EstimatorKind>> {
        self.sweep
            .as_ref()
            .map_or(Ok(Vec::new()), |s| s.estimators.iter().map(|e| e.parse()).collect())
    }

    pub fn sweep_config(&self) -> Result<SweepConfig<f64>> {
        let spec = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("missing [sweep] section".into()))?;
        let finite = [spec.snr_start_db, spec.snr_stop_db, spec.snr_step_db]
            .iter()
            .all(|v| v.is_finite());
        if !finite || spec.snr_step_db <= 0.0 || spec.snr_stop_db < spec.snr_start_db {
            return Err(Error::Config(
                "sweep: need finite snr_start_db <= snr_stop_db and snr_step_db > 0".into(),
            ));
        }
        let config = SweepConfig {
            model: self.model()?,
            snr_db_grid: snr_grid(spec.snr_start_db, spec.snr_stop_db, spec.snr_step_db),
            trials: spec.trials,
            seed: spec.seed,
            estimators: self.estimators()?,
        };
        config.validate().map_err(|e| Error::Config(format!("sweep: {e}")))?;
        Ok(config)
    }
}
