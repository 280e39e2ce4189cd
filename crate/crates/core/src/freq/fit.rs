//! Noise-relaxed inclusion fit over frequency samples.

use crate::error::Result;
use crate::inclusion::{DataPoint, Inclusion, DEFAULT_SPECIALNESS_TOL};
use crate::noise::chi2_threshold;
use crate::solver::{assemble, solve, NoiseModel, SolverConfig, SolverResult};

use super::plant::FrequencySample;

#[derive(Debug, Clone)]
pub struct QipFit {
    pub result: SolverResult,
    pub alpha: f64,
}

impl QipFit {
    /// Inclusion with `CᵀC = X_C`; `C` may be singular.
    pub fn inclusion(&self) -> Result<Inclusion> {
        self.result.ssdd.to_inclusion_semidefinite(DEFAULT_SPECIALNESS_TOL)
    }

    pub fn width(&self) -> Result<f64> {
        self.result.width()
    }
}

pub fn data_points(samples: &[FrequencySample]) -> Vec<DataPoint> {
    samples
        .iter()
        .map(|s| DataPoint::new(s.summary.mean_complex(), s.x.clone()))
        .collect()
}

/// Fit with per-sample `Σ_η` and `α = chi2_threshold(1, delta)`.
pub fn fit_qip(samples: &[FrequencySample], delta: f64, cfg: &SolverConfig) -> Result<QipFit> {
    let alpha = chi2_threshold(1, delta);
    let summaries: Vec<_> = samples.iter().map(|s| s.summary.clone()).collect();
    let problem = assemble(&data_points(samples), &NoiseModel::from_summaries(&summaries), alpha)?;
    let result = solve(&problem, cfg)?;
    Ok(QipFit { result, alpha })
}
