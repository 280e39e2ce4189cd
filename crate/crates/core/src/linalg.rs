//! Small dense linear-algebra helpers shared by the model and solver code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entries in row-major order.
pub fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(symmetrize(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetrize(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Positive definiteness by attempted Cholesky factorization.
pub fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    m.clone().cholesky().is_some()
}

pub fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    m.clone().svd(false, false).singular_values
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).max()
}

pub fn complex_spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// True when the smallest singular value exceeds `rel_tol` times the largest.
pub fn is_well_conditioned(m: &DMatrix<f64>, rel_tol: f64) -> bool {
    if m.nrows() != m.ncols() || m.is_empty() {
        return false;
    }
    let sv = singular_values(m);
    let (lo, hi) = (sv.min(), sv.max());
    hi > 0.0 && lo > rel_tol * hi
}

/// A factor `S` with `SᵀS = m` for symmetric PSD `m` (negative eigenvalues are
/// clamped to zero).
pub fn psd_factor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let n = m.nrows();
    let mut s = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        for j in 0..n {
            s[(k, j)] = lam * v[j];
        }
    }
    s
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `v^H M v` for real symmetric `M`, evaluated in complex arithmetic.
pub fn hermitian_form(m: &DMatrix<f64>, v: &CVector) -> Complex64 {
    let mv = to_complex(m) * v;
    v.dotc(&mv)
}

/// `Re(a b^H)`: the real matrix that represents the bilinear form
/// `Re(a)^T X Re(b) + Im(a)^T X Im(b)` as `<Re(a b^H), X>`.
pub fn real_outer(a: &CVector, b: &CVector) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| (a[i] * b[j].conj()).re)
}

pub fn frobenius_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// `log det` of a positive definite matrix, or `None` if factorization fails.
pub fn log_det_pd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    let l = chol.l();
    Some(2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}
