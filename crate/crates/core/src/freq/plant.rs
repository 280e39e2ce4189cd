//! Simulated two-mode plant with delay, observed through noisy
//! single-period phasor measurements.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QipError, Result};
use crate::linalg::CVector;
use crate::noise::{summarize, NoiseSummary};

use super::basis::{eval_basis, BasisGenerator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantConfig {
    /// Natural frequency of each second-order mode, rad/s.
    pub modes: Vec<f64>,
    /// One damping ratio per mode for each experiment condition.
    pub dampings: Vec<Vec<f64>>,
    /// Seconds.
    pub delay: f64,
    pub gain: f64,
    pub sigma_out: f64,
    pub sigma_in: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self {
            modes: vec![0.5, 5.0],
            dampings: vec![vec![0.1, 0.1], vec![0.3, 0.2], vec![0.05, 0.4]],
            delay: 0.1,
            gain: 1.0,
            sigma_out: 0.02,
            sigma_in: 0.02,
            repeats: 16,
            seed: 7,
        }
    }
}

impl PlantConfig {
    pub fn n_conditions(&self) -> usize {
        self.dampings.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(QipError::InvalidModel(m));
        if self.modes.iter().any(|w| !(*w > 0.0)) {
            return bad("mode frequencies must be positive".into());
        }
        for (k, d) in self.dampings.iter().enumerate() {
            if d.len() != self.modes.len() {
                return bad(format!("condition {k} has {} damping ratios for {} modes", d.len(), self.modes.len()));
            }
            if d.iter().any(|z| !(*z > 0.0 && *z < 1.0)) {
                return bad(format!("condition {k} has a damping ratio outside (0, 1)"));
            }
        }
        if !(self.delay >= 0.0) {
            return bad("delay must be nonnegative".into());
        }
        if !(self.sigma_out >= 0.0 && self.sigma_in >= 0.0) {
            return bad("noise levels must be nonnegative".into());
        }
        if self.repeats == 0 {
            return bad("at least one repeat is required".into());
        }
        Ok(())
    }

    /// `G(jω) = gain·e^{−jωτ}·Π ω_k²/((jω)² + 2ζ_kω_k(jω) + ω_k²)`.
    pub fn true_response(&self, condition: usize, omega: f64) -> Complex64 {
        let s = Complex64::new(0.0, omega);
        let mut g = Complex64::from_polar(self.gain, -omega * self.delay);
        for (wk, zk) in self.modes.iter().zip(&self.dampings[condition]) {
            g *= wk * wk / (s * s + 2.0 * zk * wk * s + wk * wk);
        }
        g
    }
}

#[derive(Debug, Clone)]
pub struct FrequencySample {
    pub omega: f64,
    pub condition: usize,
    pub x: CVector,
    pub summary: NoiseSummary,
    pub input_amp: f64,
}

/// `n` log-spaced frequencies from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// RNG for one `(condition, frequency index)` cell, independent of scheduling.
pub fn cell_rng(seed: u64, condition: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((condition as u64) << 32) | index as u64);
    rng
}

/// Each repeat observes `ŷ = G(jω)(F + η_in) + η_out`, with complex noise of
/// per-part variance `σ²/T` for one excitation period `T = 2π/ω`.
pub fn simulate_plant<R: Rng>(
    cfg: &PlantConfig,
    basis: &BasisGenerator,
    condition: usize,
    omega: f64,
    n_repeats: usize,
    rng: &mut R,
) -> Result<FrequencySample> {
    if condition >= cfg.n_conditions() {
        return Err(QipError::InvalidModel(format!(
            "condition {condition} out of range ({} configured)",
            cfg.n_conditions()
        )));
    }
    if !(omega > 0.0) || n_repeats == 0 {
        return Err(QipError::InvalidModel("omega must be positive and repeats nonzero".into()));
    }
    let f = Complex64::new(1.0, 0.0);
    let g = cfg.true_response(condition, omega);
    let period = 2.0 * std::f64::consts::PI / omega;
    let normal = |sigma: f64| Normal::new(0.0, sigma / period.sqrt()).expect("finite deviation");
    let (n_out, n_in) = (normal(cfg.sigma_out), normal(cfg.sigma_in));
    let draw = |d: &Normal<f64>, rng: &mut R| Complex64::new(d.sample(rng), d.sample(rng));
    let samples: Vec<CVector> = (0..n_repeats)
        .map(|_| {
            let eta_in = draw(&n_in, rng);
            let eta_out = draw(&n_out, rng);
            CVector::from_element(1, g * (f + eta_in) + eta_out)
        })
        .collect();
    let summary = if n_repeats == 1 {
        NoiseSummary::exact(&samples[0])
    } else {
        summarize(&samples)?
    };
    Ok(FrequencySample {
        omega,
        condition,
        x: eval_basis(basis, omega, f),
        summary,
        input_amp: f.norm(),
    })
}

/// Every condition at every grid frequency, in condition-major order.
pub fn simulate_grid(cfg: &PlantConfig, basis: &BasisGenerator, grid: &[f64]) -> Result<Vec<FrequencySample>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (0..cfg.n_conditions())
        .flat_map(|c| (0..grid.len()).map(move |i| (c, i)))
        .collect();
    cells
        .par_iter()
        .map(|&(c, i)| {
            let mut rng = cell_rng(cfg.seed, c, i);
            simulate_plant(cfg, basis, c, grid[i], cfg.repeats, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::basis::{default_poles, make_basis};

    fn quiet() -> PlantConfig {
        PlantConfig {
            sigma_out: 0.0,
            sigma_in: 0.0,
            repeats: 1,
            ..PlantConfig::default()
        }
    }

    #[test]
    fn dc_limit_is_the_gain() {
        let cfg = PlantConfig {
            delay: 0.0,
            gain: 2.5,
            dampings: vec![vec![0.5, 0.5]],
            ..quiet()
        };
        assert!((cfg.true_response(0, 1e-5).norm() - 2.5).abs() < 1e-4);
    }

    #[test]
    fn delay_shifts_phase_linearly() {
        let with = quiet();
        let without = PlantConfig { delay: 0.0, ..quiet() };
        for w in log_grid(0.01, 100.0, 25) {
            let ratio = with.true_response(1, w) / without.true_response(1, w);
            assert!((ratio.norm() - 1.0).abs() < 1e-12);
            let expected = Complex64::from_polar(1.0, -0.1 * w);
            assert!((ratio - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn noiseless_measurement_is_exact() {
        let basis = make_basis(&default_poles()).unwrap();
        let s = simulate_plant(&quiet(), &basis, 2, 3.0, 1, &mut cell_rng(1, 2, 0)).unwrap();
        assert_eq!(s.summary.mean_complex()[0], quiet().true_response(2, 3.0));
        assert!(s.summary.sigma_eta.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn averaging_shrinks_covariance() {
        let basis = make_basis(&default_poles()).unwrap();
        let cfg = PlantConfig::default();
        let mean_trace = |n: usize| {
            let trials = 200;
            (0..trials)
                .map(|k| {
                    let mut rng = cell_rng(99, 0, k);
                    simulate_plant(&cfg, &basis, 0, 1.0, n, &mut rng).unwrap().summary.sigma_eta.trace()
                })
                .sum::<f64>()
                / trials as f64
        };
        let (t4, t16, t64) = (mean_trace(4), mean_trace(16), mean_trace(64));
        assert!((t4 / t16 / 4.0 - 1.0).abs() < 0.15, "{t4} {t16}");
        assert!((t16 / t64 / 4.0 - 1.0).abs() < 0.15, "{t16} {t64}");
    }

    #[test]
    fn grid_is_reproducible_and_log_spaced() {
        let basis = make_basis(&default_poles()).unwrap();
        let grid = log_grid(0.01, 100.0, 100);
        assert!((grid[0] - 0.01).abs() < 1e-15 && (grid[99] - 100.0).abs() < 1e-11);
        let cfg = PlantConfig::default();
        let a = simulate_grid(&cfg, &basis, &grid).unwrap();
        let b = simulate_grid(&cfg, &basis, &grid).unwrap();
        assert_eq!(a.len(), 300);
        assert!(a.iter().zip(&b).all(|(p, q)| p.summary == q.summary));
    }
}
