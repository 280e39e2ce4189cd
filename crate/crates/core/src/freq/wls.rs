//! Weighted least-squares baseline with a real coefficient vector and its
//! minimal covariance scaling.

use nalgebra::{DMatrix, DVector};

use crate::error::{QipError, Result};
use crate::inclusion::Ssdd;
use crate::linalg::{self, CVector};

use super::plant::FrequencySample;

/// Relative floor added to each `Σ_η` before inversion.
pub const SIGMA_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct WlsFit {
    /// Real coefficients `θ`, so that `ŷ = θᵀx`.
    pub theta: DVector<f64>,
    /// `(Σ Φᵀ Σ_η⁻¹ Φ)⁻¹`.
    pub sigma_a: DMatrix<f64>,
}

impl WlsFit {
    pub fn predict(&self, x: &CVector) -> num_complex::Complex64 {
        x.iter().zip(self.theta.iter()).map(|(xi, t)| xi * *t).sum()
    }

    /// The scaled baseline as an SS-DD point: `X_B = 1`, `X_A = θᵀ`,
    /// `X_AA = θθᵀ`, `X_C = γ·Σ_A`.
    pub fn scaled_ssdd(&self, gamma: f64) -> Ssdd {
        let row = self.theta.transpose();
        Ssdd {
            xb: DMatrix::from_element(1, 1, 1.0),
            xa: DMatrix::from_row_slice(1, row.len(), row.as_slice()),
            xaa: &self.theta * self.theta.transpose(),
            xc: &self.sigma_a * gamma,
        }
    }
}

/// `Φ(x) = [Re xᵀ; Im xᵀ]`, the real map `θ ↦ φ(θᵀx)`.
fn regressor(x: &CVector) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(2, n, |r, c| if r == 0 { x[c].re } else { x[c].im })
}

fn floored(sigma: &DMatrix<f64>) -> DMatrix<f64> {
    let tr = sigma.trace();
    let floor = if tr > 0.0 { SIGMA_FLOOR * tr } else { SIGMA_FLOOR };
    sigma + DMatrix::identity(sigma.nrows(), sigma.ncols()) * floor
}

pub fn fit_wls(samples: &[FrequencySample]) -> Result<WlsFit> {
    let n = samples.first().map(|s| s.x.len()).unwrap_or(0);
    if samples.len() < n || n == 0 {
        return Err(QipError::InsufficientData(format!(
            "{} samples for {n} coefficients",
            samples.len()
        )));
    }
    let mut normal = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for s in samples {
        if s.summary.n_y() != 1 || s.x.len() != n {
            return Err(QipError::Dimension("least squares expects scalar outputs".into()));
        }
        let phi = regressor(&s.x);
        let w = floored(&s.summary.sigma_eta)
            .try_inverse()
            .ok_or(QipError::SingularNormalEquations)?;
        let pw = phi.transpose() * w;
        normal += &pw * &phi;
        rhs += &pw * &s.summary.mean;
    }
    let normal = linalg::symmetrize(&normal);
    let chol = normal.cholesky().ok_or(QipError::SingularNormalEquations)?;
    Ok(WlsFit {
        theta: chol.solve(&rhs),
        sigma_a: linalg::symmetrize(&chol.inverse()),
    })
}

/// Smallest `γ ≥ 0` such that `B = 1`, `CᵀC = γΣ_A` satisfies every
/// noise-relaxed inclusion inequality around the baseline.
pub fn ls_min_scaling(samples: &[FrequencySample], fit: &WlsFit, alpha: f64) -> Result<f64> {
    let mut gamma = 0.0f64;
    for (index, s) in samples.iter().enumerate() {
        let r = s.summary.mean_complex()[0] - fit.predict(&s.x);
        let numerator = r.norm_sqr() - alpha * s.summary.sigma_eta.trace();
        let (re, im) = (s.x.map(|v| v.re), s.x.map(|v| v.im));
        let spread = re.dot(&(&fit.sigma_a * &re)) + im.dot(&(&fit.sigma_a * &im));
        if numerator <= 0.0 {
            continue;
        }
        if !(spread > 0.0) {
            return Err(QipError::Unscalable { index });
        }
        gamma = gamma.max(numerator / spread);
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::basis::{default_poles, eval_basis, make_basis};
    use crate::noise::NoiseSummary;
    use num_complex::Complex64;

    fn synthetic(theta: &[f64], grid: &[f64]) -> Vec<FrequencySample> {
        let basis = make_basis(&default_poles()).unwrap();
        let theta = DVector::from_column_slice(theta);
        grid.iter()
            .map(|&w| {
                let x = eval_basis(&basis, w, Complex64::new(1.0, 0.0));
                let y: Complex64 = x.iter().zip(theta.iter()).map(|(a, b)| a * *b).sum();
                FrequencySample {
                    omega: w,
                    condition: 0,
                    x,
                    summary: NoiseSummary::exact(&CVector::from_element(1, y)),
                    input_amp: 1.0,
                }
            })
            .collect()
    }

    const THETA: [f64; 6] = [0.3, -1.2, 0.5, 0.05, 2.0, -0.7];

    #[test]
    fn noiseless_data_is_interpolated() {
        let samples = synthetic(&THETA, &crate::freq::log_grid(0.01, 100.0, 40));
        let fit = fit_wls(&samples).unwrap();
        for (a, b) in fit.theta.iter().zip(THETA) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert!(fit.sigma_a.amax() < 1e-10);
        let exact = WlsFit {
            theta: DVector::from_column_slice(&THETA),
            sigma_a: fit.sigma_a.clone(),
        };
        assert_eq!(ls_min_scaling(&samples, &exact, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn duplicating_samples_halves_covariance() {
        let mut samples = synthetic(&THETA, &crate::freq::log_grid(0.1, 10.0, 12));
        for (k, s) in samples.iter_mut().enumerate() {
            let wobble = Complex64::new(0.01 * (k as f64).sin(), 0.02 * (k as f64).cos());
            s.summary.mean[0] += wobble.re;
            s.summary.mean[1] += wobble.im;
            s.summary.sigma_eta = DMatrix::identity(2, 2) * (1e-4 * (1.0 + k as f64));
        }
        let once = fit_wls(&samples).unwrap();
        let doubled: Vec<_> = samples.iter().chain(samples.iter()).cloned().collect();
        let twice = fit_wls(&doubled).unwrap();
        assert!((&once.theta - &twice.theta).amax() < 1e-9 * once.theta.amax());
        assert!((&once.sigma_a * 0.5 - &twice.sigma_a).amax() < 1e-9 * once.sigma_a.amax());
    }

    #[test]
    fn single_sample_scaling() {
        let fit = WlsFit {
            theta: DVector::zeros(1),
            sigma_a: DMatrix::from_element(1, 1, 0.5),
        };
        // residual² = 1 = 2·(x*Σ_A x) with x = 1.
        let s = FrequencySample {
            omega: 1.0,
            condition: 0,
            x: CVector::from_element(1, Complex64::new(1.0, 0.0)),
            summary: NoiseSummary::exact(&CVector::from_element(1, Complex64::new(0.0, 1.0))),
            input_amp: 1.0,
        };
        assert!((ls_min_scaling(std::slice::from_ref(&s), &fit, 0.0).unwrap() - 2.0).abs() < 1e-15);
        let flat = WlsFit {
            sigma_a: DMatrix::zeros(1, 1),
            ..fit
        };
        assert!(matches!(ls_min_scaling(&[s], &flat, 0.0), Err(QipError::Unscalable { index: 0 })));
    }
}
