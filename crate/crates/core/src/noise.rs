//! Real embedding of complex measurements, averaging of repeats, and the
//! chi-square noise offset.
//!
//! `φ(y) = (Re y; Im y)`. For `N` repeated measurements the summary keeps the
//! sample mean of `φ(ŷ_n)` and the covariance *of that mean*,
//! `Σ_η = Σ (φ(ŷ_n) − ȳ)(φ(ŷ_n) − ȳ)ᵀ / (N² − N)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::linalg::{self, CVector};

pub use crate::chi2::chi2_threshold;

/// Default tail probability for the chi-square threshold.
pub const DEFAULT_DELTA: f64 = 0.01;

pub fn phi(y: &CVector) -> DVector<f64> {
    let n = y.len();
    DVector::from_fn(2 * n, |i, _| if i < n { y[i].re } else { y[i - n].im })
}

pub fn phi_inv(v: &DVector<f64>) -> Result<CVector> {
    if !v.len().is_multiple_of(2) {
        return Err(QipError::Dimension(format!(
            "real embedding has odd length {}",
            v.len()
        )));
    }
    let n = v.len() / 2;
    Ok(CVector::from_fn(n, |i, _| Complex64::new(v[i], v[n + i])))
}

/// Mean and covariance-of-the-mean of repeated measurements of one output.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSummary {
    pub mean: DVector<f64>,
    pub sigma_eta: DMatrix<f64>,
    pub n_samples: usize,
}

impl NoiseSummary {
    /// A single noise-free observation (`Σ_η = 0`).
    pub fn exact(y: &CVector) -> Self {
        let mean = phi(y);
        let n = mean.len();
        Self {
            mean,
            sigma_eta: DMatrix::zeros(n, n),
            n_samples: 1,
        }
    }

    pub fn n_y(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean_complex(&self) -> CVector {
        phi_inv(&self.mean).expect("mean has even length by construction")
    }

    /// The `n_y × n_y` matrix `M` with `tr[Σ_η (I₂⊗X_B)] = ⟨M, X_B⟩`.
    pub fn offset_matrix(&self) -> DMatrix<f64> {
        offset_matrix(&self.sigma_eta)
    }
}

pub fn summarize(samples: &[CVector]) -> Result<NoiseSummary> {
    let n = samples.len();
    if n < 2 {
        return Err(QipError::InsufficientData(format!(
            "need at least two repeated measurements, got {n}"
        )));
    }
    let dim = samples[0].len();
    if samples.iter().any(|s| s.len() != dim) {
        return Err(QipError::Dimension("repeated measurements differ in length".into()));
    }
    let embedded: Vec<DVector<f64>> = samples.iter().map(phi).collect();
    let mean = embedded
        .iter()
        .fold(DVector::zeros(2 * dim), |acc, v| acc + v)
        / n as f64;
    let mut sigma = DMatrix::zeros(2 * dim, 2 * dim);
    for v in &embedded {
        let d = v - &mean;
        sigma += &d * d.transpose();
    }
    sigma /= (n * n - n) as f64;
    Ok(NoiseSummary {
        mean,
        sigma_eta: linalg::symmetrize(&sigma),
        n_samples: n,
    })
}

fn offset_matrix(sigma_eta: &DMatrix<f64>) -> DMatrix<f64> {
    let n = sigma_eta.nrows() / 2;
    let m = sigma_eta.view((0, 0), (n, n)) + sigma_eta.view((n, n), (n, n));
    linalg::symmetrize(&m)
}

/// `tr[Σ_η (I₂⊗X_B)]`; linear in `X_B`.
pub fn offset_value(sigma_eta: &DMatrix<f64>, xb: &DMatrix<f64>) -> Result<f64> {
    if sigma_eta.nrows() != 2 * xb.nrows() || sigma_eta.ncols() != sigma_eta.nrows() {
        return Err(QipError::Dimension(format!(
            "Σ_η is {}x{} but X_B is {}x{}",
            sigma_eta.nrows(),
            sigma_eta.ncols(),
            xb.nrows(),
            xb.ncols()
        )));
    }
    let n = xb.nrows();
    let mut acc = 0.0;
    for block in [0, n] {
        for i in 0..n {
            for j in 0..n {
                acc += sigma_eta[(block + i, block + j)] * xb[(j, i)];
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::cvec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&cvec(&[(1.0, 2.0)])).as_slice(), &[1.0, 2.0]);
        assert_eq!(phi(&cvec(&[(0.0, 0.0)])).as_slice(), &[0.0, 0.0]);
        assert!(phi_inv(&DVector::from_vec(vec![1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn summarize_two_identical() {
        let y = cvec(&[(0.3, -1.0)]);
        let s = summarize(&[y.clone(), y]).unwrap();
        assert_eq!(s.sigma_eta, DMatrix::zeros(2, 2));
    }

    #[test]
    fn summarize_plus_minus_one() {
        let s = summarize(&[cvec(&[(1.0, 0.0)]), cvec(&[(-1.0, 0.0)])]).unwrap();
        assert_eq!(s.mean.as_slice(), &[0.0, 0.0]);
        assert_eq!(s.sigma_eta[(0, 0)], 1.0);
        assert_eq!(s.sigma_eta[(1, 1)], 0.0);
        assert_eq!(s.sigma_eta[(0, 1)], 0.0);
    }

    #[test]
    fn summarize_needs_two() {
        assert!(summarize(&[cvec(&[(1.0, 0.0)])]).is_err());
    }

    #[test]
    fn covariance_of_the_mean_matches_clt() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sigma = 0.7;
        let normal = Normal::new(0.0, sigma).unwrap();
        let n = 10_000;
        let samples: Vec<CVector> = (0..n)
            .map(|_| cvec(&[(normal.sample(&mut rng), normal.sample(&mut rng))]))
            .collect();
        let s = summarize(&samples).unwrap();
        let expected = sigma * sigma / n as f64;
        for i in 0..2 {
            assert!((s.sigma_eta[(i, i)] / expected - 1.0).abs() < 0.1);
        }
        assert!(s.sigma_eta[(0, 1)].abs() < 0.1 * expected);
    }

    #[test]
    fn offset_examples() {
        let one = DMatrix::from_element(1, 1, 1.0);
        assert_eq!(offset_value(&DMatrix::identity(2, 2), &one).unwrap(), 2.0);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.3, 0.9]));
        assert!((offset_value(&d, &one).unwrap() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn offset_matches_kronecker_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let sigma = &g * g.transpose();
        let h = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
        let xb = &h * h.transpose();
        let kron = DMatrix::<f64>::identity(2, 2).kronecker(&xb);
        let expected = (&sigma * kron).trace();
        assert!((offset_value(&sigma, &xb).unwrap() - expected).abs() < 1e-12);
        let via_matrix = linalg::frobenius_inner(&offset_matrix(&sigma), &xb);
        assert!((via_matrix - expected).abs() < 1e-12);
    }
}
