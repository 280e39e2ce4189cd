//! Orthonormal basis functions `x(s) = C_g (sI − A_g)⁻¹ B_g` built from a
//! pole set.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::linalg::{CMatrix, CVector};

use super::lyapunov::{lyapunov_solve, spectral_abscissa};

/// Poles used when none are configured: two lightly damped pairs near the
/// plant modes, a low-pass pole and a fast pole.
pub const DEFAULT_POLES: [(f64, f64); 6] = [
    (-0.15, 0.48),
    (-0.15, -0.48),
    (-1.5, 4.8),
    (-1.5, -4.8),
    (-10.0, 0.0),
    (-50.0, 0.0),
];

#[derive(Debug, Clone)]
pub struct BasisGenerator {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DMatrix<f64>,
    /// Controllability Gramian of `(A_g, B_g)`.
    pub gramian: DMatrix<f64>,
}

impl BasisGenerator {
    pub fn order(&self) -> usize {
        self.b.len()
    }
}

pub fn default_poles() -> Vec<Complex64> {
    DEFAULT_POLES.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

/// Real modal realization: a `[[σ, ω], [−ω, σ]]` block per conjugate pair and a
/// scalar block per real pole.
fn modal_matrix(poles: &[Complex64]) -> Result<DMatrix<f64>> {
    let n = poles.len();
    let mut used = vec![false; n];
    let mut blocks: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let p = poles[i];
        let tol = 1e-12 * p.norm().max(1.0);
        if p.im.abs() <= tol {
            used[i] = true;
            blocks.push(vec![p.re]);
            continue;
        }
        let partner = (0..n).find(|&j| j != i && !used[j] && (poles[j] - p.conj()).norm() <= tol);
        let Some(j) = partner else {
            return Err(QipError::PoleSet);
        };
        used[i] = true;
        used[j] = true;
        let w = p.im.abs();
        blocks.push(vec![p.re, w]);
    }
    let mut a = DMatrix::zeros(n, n);
    let mut k = 0;
    for blk in blocks {
        if let [s] = blk[..] {
            a[(k, k)] = s;
            k += 1;
        } else {
            let (s, w) = (blk[0], blk[1]);
            a[(k, k)] = s;
            a[(k, k + 1)] = w;
            a[(k + 1, k)] = -w;
            a[(k + 1, k + 1)] = s;
            k += 2;
        }
    }
    Ok(a)
}

pub fn make_basis(poles: &[Complex64]) -> Result<BasisGenerator> {
    if poles.is_empty() {
        return Err(QipError::PoleSet);
    }
    let max_real = poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    if !(max_real < 0.0) {
        return Err(QipError::NotHurwitz { max_real });
    }
    let a = modal_matrix(poles)?;
    debug_assert!(spectral_abscissa(&a) < 0.0);
    let n = poles.len();
    let b = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    // A W + W Aᵀ + B Bᵀ = 0.
    let gramian = lyapunov_solve(&a.transpose(), &(&b * b.transpose()))?;
    let l = gramian
        .clone()
        .cholesky()
        .ok_or_else(|| QipError::InvalidModel("pole set gives an uncontrollable realization".into()))?
        .l();
    let c = l
        .try_inverse()
        .ok_or_else(|| QipError::InvalidModel("Gramian factor is singular".into()))?;
    Ok(BasisGenerator { a, b, c, gramian })
}

/// `x = C_g (jωI − A_g)⁻¹ B_g F`. Negative `omega` is accepted and gives the
/// conjugate of the positive-frequency value.
pub fn eval_basis(g: &BasisGenerator, omega: f64, f: Complex64) -> CVector {
    let n = g.order();
    let jw = Complex64::new(0.0, omega);
    let m = CMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { jw } else { Complex64::new(0.0, 0.0) };
        d - g.a[(i, j)]
    });
    let rhs = CVector::from_fn(n, |i, _| Complex64::new(g.b[i], 0.0));
    let v = m.lu().solve(&rhs).expect("jωI − A_g is invertible for Hurwitz A_g");
    let c = g.c.map(|v| Complex64::new(v, 0.0));
    c * v * f
}

/// H₂ Gram matrix `(1/2π)∫ x(jω)x(jω)* dω` by the trapezoid rule on a log
/// grid over `[lo, hi]`, closed with a linear segment on `[0, lo]` and the
/// `1/ω²` tail above `hi`.
pub fn h2_gram_quadrature(g: &BasisGenerator, lo: f64, hi: f64, n: usize) -> DMatrix<f64> {
    let one = Complex64::new(1.0, 0.0);
    let outer = |w: f64| {
        let x = eval_basis(g, w, one);
        crate::linalg::real_outer(&x, &x)
    };
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / n as f64;
    let mut acc = (outer(0.0) + outer(lo)) * (0.5 * lo);
    for i in 0..=n {
        let w = (a + i as f64 * h).exp();
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 } * h * w;
        acc += outer(w) * weight;
    }
    acc += outer(hi) * hi;
    // Conjugate symmetry folds the negative half-axis onto the positive one.
    acc / std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_basis() {
        let g = make_basis(&[Complex64::new(-1.0, 0.0)]).unwrap();
        assert!((g.c[(0, 0)] - 2f64.sqrt()).abs() < 1e-12);
        let x = eval_basis(&g, 1.0, Complex64::new(1.0, 0.0));
        let expected = Complex64::new(2f64.sqrt(), 0.0) / Complex64::new(1.0, 1.0);
        assert!((x[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn two_real_poles_are_orthonormal() {
        let g = make_basis(&[Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 0.0)]).unwrap();
        let gram = h2_gram_quadrature(&g, 1e-4, 1e4, 20_000);
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-6);
    }

    #[test]
    fn default_basis_identities() {
        let g = make_basis(&default_poles()).unwrap();
        let id = &g.c * &g.gramian * g.c.transpose();
        assert!((id - DMatrix::identity(6, 6)).amax() < 1e-8);
        let gram = h2_gram_quadrature(&g, 1e-4, 1e4, 20_000);
        assert!((&gram - DMatrix::identity(6, 6)).amax() < 1e-6, "{gram}");
    }

    #[test]
    fn zero_input_and_conjugate_symmetry() {
        let g = make_basis(&default_poles()).unwrap();
        assert!(eval_basis(&g, 2.0, Complex64::new(0.0, 0.0)).iter().all(|v| v.norm() == 0.0));
        let one = Complex64::new(1.0, 0.0);
        let (p, m) = (eval_basis(&g, 2.0, one), eval_basis(&g, -2.0, one));
        assert!((p.conjugate() - m).norm() < 1e-14);
    }

    #[test]
    fn unpaired_pole_is_rejected() {
        assert!(matches!(make_basis(&[Complex64::new(-1.0, 1.0)]), Err(QipError::PoleSet)));
        assert!(matches!(
            make_basis(&[Complex64::new(0.5, 0.0)]),
            Err(QipError::NotHurwitz { .. })
        ));
    }
}
