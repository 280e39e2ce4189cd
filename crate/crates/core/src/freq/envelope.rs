//! Magnitude envelope of a scalar-output inclusion along a frequency grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QipError, Result};
use crate::inclusion::Ssdd;

use super::basis::{eval_basis, BasisGenerator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub omega: f64,
    pub nominal: f64,
    pub min: f64,
    pub max: f64,
    /// Radians.
    pub phase: f64,
}

impl EnvelopePoint {
    pub fn contains(&self, magnitude: f64) -> bool {
        magnitude >= self.min && magnitude <= self.max
    }
}

/// Nominal `|Ax|` and radius `r = √(x*X_C x / X_B)` at unit input.
pub fn bode_envelope(s: &Ssdd, basis: &BasisGenerator, grid: &[f64]) -> Result<Vec<EnvelopePoint>> {
    if s.n_y() != 1 {
        return Err(QipError::Dimension("envelopes need a scalar output".into()));
    }
    let xb = s.xb[(0, 0)];
    if !(xb > 0.0) {
        return Err(QipError::InfiniteWidth);
    }
    let a = s.xa.row(0) / xb;
    Ok(grid
        .iter()
        .map(|&omega| {
            let x = eval_basis(basis, omega, Complex64::new(1.0, 0.0));
            let ax: Complex64 = x.iter().zip(a.iter()).map(|(xi, ai)| xi * *ai).sum();
            let (re, im) = (x.map(|v| v.re), x.map(|v| v.im));
            let spread = re.dot(&(&s.xc * &re)) + im.dot(&(&s.xc * &im));
            let r = (spread.max(0.0) / xb).sqrt();
            let nominal = ax.norm();
            EnvelopePoint {
                omega,
                nominal,
                min: (nominal - r).max(0.0),
                max: nominal + r,
                phase: ax.arg(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::basis::{default_poles, make_basis};
    use nalgebra::DMatrix;

    #[test]
    fn zero_uncertainty_collapses_to_nominal() {
        let basis = make_basis(&default_poles()).unwrap();
        let theta = DMatrix::from_row_slice(1, 6, &[0.2, 0.1, -0.4, 0.3, 0.0, 1.0]);
        let s = Ssdd {
            xb: DMatrix::from_element(1, 1, 2.0),
            xa: &theta * 2.0,
            xaa: theta.transpose() * &theta * 2.0,
            xc: DMatrix::zeros(6, 6),
        };
        for p in bode_envelope(&s, &basis, &[0.1, 1.0, 10.0]).unwrap() {
            assert_eq!(p.min, p.nominal);
            assert_eq!(p.max, p.nominal);
        }
    }

    #[test]
    fn pure_uncertainty_spans_the_regressor_norm() {
        let basis = make_basis(&default_poles()).unwrap();
        let s = Ssdd {
            xb: DMatrix::from_element(1, 1, 1.0),
            xa: DMatrix::zeros(1, 6),
            xaa: DMatrix::zeros(6, 6),
            xc: DMatrix::identity(6, 6),
        };
        for p in bode_envelope(&s, &basis, &[0.03, 3.0, 30.0]).unwrap() {
            let x = eval_basis(&basis, p.omega, Complex64::new(1.0, 0.0));
            assert_eq!(p.min, 0.0);
            assert!((p.max - x.norm()).abs() < 1e-14);
        }
    }
}
