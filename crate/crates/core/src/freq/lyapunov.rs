//! Continuous-time Lyapunov equations by Kronecker vectorization.

use nalgebra::DMatrix;

use crate::error::{QipError, Result};
use crate::linalg;

/// Largest real part among the eigenvalues of `a`.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Solve `W A + Aᵀ W + M = 0` for symmetric `W`.
///
/// The controllability Gramian of `(A, B)` is `lyapunov_solve(&A.transpose(), &(B Bᵀ))`.
pub fn lyapunov_solve(a: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || m.shape() != (n, n) {
        return Err(QipError::Dimension("Lyapunov operands must be square and equal-sized".into()));
    }
    let max_real = spectral_abscissa(a);
    if !(max_real < 0.0) {
        return Err(QipError::NotHurwitz { max_real });
    }
    let id = DMatrix::<f64>::identity(n, n);
    // vec(WA) = (Aᵀ ⊗ I) vec W, vec(AᵀW) = (I ⊗ Aᵀ) vec W.
    let op = a.transpose().kronecker(&id) + id.kronecker(&a.transpose());
    let rhs = -DMatrix::from_column_slice(n * n, 1, m.as_slice());
    let sol = op
        .lu()
        .solve(&rhs)
        .ok_or_else(|| QipError::InvalidModel("Lyapunov operator is singular".into()))?;
    Ok(linalg::symmetrize(&DMatrix::from_column_slice(n, n, sol.as_slice())))
}

pub fn lyapunov_residual(a: &DMatrix<f64>, m: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    (w * a + a.transpose() * w + m).norm()
}
