//! End-to-end frequency-domain experiment: simulate, fit, baseline, envelopes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::solver::{SolverConfig, SolverStatus};

use super::basis::{make_basis, BasisGenerator, DEFAULT_POLES};
use super::envelope::{bode_envelope, EnvelopePoint};
use super::fit::{fit_qip, QipFit};
use super::plant::{log_grid, simulate_grid, FrequencySample, PlantConfig};
use super::wls::{fit_wls, ls_min_scaling, WlsFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            min: 0.01,
            max: 100.0,
            points: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub plant: PlantConfig,
    pub grid: GridConfig,
    /// `[re, im]` pairs.
    pub basis_poles: Vec<[f64; 2]>,
    pub delta: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            plant: PlantConfig::default(),
            grid: GridConfig::default(),
            basis_poles: DEFAULT_POLES.iter().map(|&(re, im)| [re, im]).collect(),
            delta: crate::noise::DEFAULT_DELTA,
        }
    }
}

impl ScenarioConfig {
    pub fn poles(&self) -> Vec<Complex64> {
        self.basis_poles.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        log_grid(self.grid.min, self.grid.max, self.grid.points)
    }
}

/// Least-squares baseline scaled to cover the same data.
#[derive(Debug, Clone)]
pub struct ScaledBaseline {
    pub fit: WlsFit,
    pub gamma_min: f64,
    pub width: f64,
    pub envelope: Vec<EnvelopePoint>,
}

#[derive(Debug, Clone)]
pub struct FreqOutcome {
    pub config: ScenarioConfig,
    pub basis: BasisGenerator,
    pub grid: Vec<f64>,
    pub samples: Vec<FrequencySample>,
    pub qip: QipFit,
    /// Present when the fit is optimal.
    pub qip_envelope: Option<Vec<EnvelopePoint>>,
    pub baseline: Option<ScaledBaseline>,
    /// `G(jω)` per condition along `grid`.
    pub true_response: Vec<Vec<Complex64>>,
}

impl FreqOutcome {
    /// Fraction of grid frequencies at which every true magnitude lies in the
    /// fitted envelope.
    pub fn containment_fraction(&self) -> Option<f64> {
        let env = self.qip_envelope.as_ref()?;
        let inside = env
            .iter()
            .enumerate()
            .filter(|(i, p)| self.true_response.iter().all(|g| p.contains(g[*i].norm())))
            .count();
        Some(inside as f64 / env.len() as f64)
    }

    /// Sample indices whose inequality is active at the optimum.
    pub fn active_samples(&self) -> &[usize] {
        &self.qip.result.active_set
    }
}

pub fn run_scenario(cfg: &ScenarioConfig, solver: &SolverConfig) -> Result<FreqOutcome> {
    let basis = make_basis(&cfg.poles())?;
    let grid = cfg.frequencies();
    let samples = simulate_grid(&cfg.plant, &basis, &grid)?;
    let qip = fit_qip(&samples, cfg.delta, solver)?;
    let optimal = qip.result.status == SolverStatus::Optimal;
    let qip_envelope = if optimal {
        Some(bode_envelope(&qip.result.ssdd, &basis, &grid)?)
    } else {
        None
    };
    let baseline = if samples.len() >= basis.order() {
        let fit = fit_wls(&samples)?;
        let gamma_min = ls_min_scaling(&samples, &fit, qip.alpha)?;
        let ssdd = fit.scaled_ssdd(gamma_min);
        Some(ScaledBaseline {
            width: ssdd.cone_width()?,
            envelope: bode_envelope(&ssdd, &basis, &grid)?,
            fit,
            gamma_min,
        })
    } else {
        None
    };
    let true_response = (0..cfg.plant.n_conditions())
        .map(|c| grid.iter().map(|&w| cfg.plant.true_response(c, w)).collect())
        .collect();
    Ok(FreqOutcome {
        config: cfg.clone(),
        basis,
        grid,
        samples,
        qip,
        qip_envelope,
        baseline,
        true_response,
    })
}
