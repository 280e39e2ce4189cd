//! Containment checks between two inclusions.
//!
//! The outer inclusion contains the inner one iff `‖Ã + B̃ΔC̃‖ ≤ 1` for every
//! `‖Δ‖ ≤ 1`, with `B̃ = B_o⁻¹B_i`, `Ã = B_o⁻¹(A_i − A_o)C_o⁻¹`, `C̃ = C_iC_o⁻¹`.
//! No finite certificate for the universal quantifier is provided here: only
//! the singular-value necessary condition and a sampling falsifier.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QipError, Result};
use crate::inclusion::Inclusion;
use crate::linalg::{self, CMatrix};

/// Slack on the unit-norm tests, absorbing roundoff in the relative frame.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Relative transforms `(Ã, B̃, C̃)` of `inner` expressed in `outer`'s frame.
#[derive(Debug, Clone)]
pub struct RelativeFrame {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl RelativeFrame {
    pub fn new(inner: &Inclusion, outer: &Inclusion) -> Result<Self> {
        if inner.n_y() != outer.n_y() || inner.n_x() != outer.n_x() {
            return Err(QipError::Dimension("inclusions have different shapes".into()));
        }
        if !outer.c_is_invertible() {
            return Err(QipError::InvalidModel(
                "outer C is singular; the relative frame needs C_o⁻¹".into(),
            ));
        }
        let bo_inv = outer
            .b()
            .clone()
            .try_inverse()
            .ok_or_else(|| QipError::InvalidModel("outer B is singular".into()))?;
        let co_inv = outer
            .c()
            .clone()
            .try_inverse()
            .ok_or_else(|| QipError::InvalidModel("outer C is singular".into()))?;
        Ok(Self {
            a: &bo_inv * (inner.a() - outer.a()) * &co_inv,
            b: &bo_inv * inner.b(),
            c: inner.c() * co_inv,
        })
    }

    /// `‖Ã + B̃ΔC̃‖₂`.
    pub fn image_norm(&self, delta: &CMatrix) -> f64 {
        let m = linalg::to_complex(&self.a)
            + linalg::to_complex(&self.b) * delta * linalg::to_complex(&self.c);
        linalg::complex_spectral_norm(&m)
    }

    /// The rank-one extremal contraction `B̃ᵀζ_B sign(ζ_BᵀÃζ_C) ζ_CᵀC̃ᵀ`,
    /// normalized to unit spectral norm.
    pub fn extremal_delta(&self) -> CMatrix {
        let zb = top_eigenvector(&(&self.b * self.b.transpose()));
        let zc = top_eigenvector(&(self.c.transpose() * &self.c));
        let proj = zb.dot(&(&self.a * &zc));
        let sign = if proj < 0.0 { -1.0 } else { 1.0 };
        let left = self.b.transpose() * &zb;
        let right = &self.c * &zc;
        let scale = left.norm() * right.norm();
        let d = left * right.transpose() * (sign / scale.max(f64::MIN_POSITIVE));
        linalg::to_complex(&d)
    }
}

fn top_eigenvector(m: &DMatrix<f64>) -> nalgebra::DVector<f64> {
    let eig = SymmetricEigen::new(linalg::symmetrize(m));
    let k = eig.eigenvalues.imax();
    eig.eigenvectors.column(k).into_owned()
}

/// `σ_max(B̃)·σ_max(C̃)`; containment requires this to be at most one.
pub fn necessary_product(inner: &Inclusion, outer: &Inclusion) -> Result<f64> {
    let frame = RelativeFrame::new(inner, outer)?;
    Ok(linalg::spectral_norm(&frame.b) * linalg::spectral_norm(&frame.c))
}

/// Necessary condition for `outer ⊇ inner`. A `false` certifies non-containment.
pub fn containment_necessary(inner: &Inclusion, outer: &Inclusion) -> Result<bool> {
    Ok(necessary_product(inner, outer)? <= 1.0 + CONTAINMENT_TOL)
}

/// Search for a contraction `Δ` whose image `Ã + B̃ΔC̃` leaves the unit ball.
///
/// Tries `Δ = 0`, the extremal rank-one construction, then `n_samples`
/// random isometries (all singular values one: the extreme points of the
/// unit ball, where the convex map `Δ ↦ ‖Ã + B̃ΔC̃‖` attains its maximum).
pub fn containment_falsify(
    inner: &Inclusion,
    outer: &Inclusion,
    n_samples: usize,
    seed: u64,
) -> Result<Option<CMatrix>> {
    let frame = RelativeFrame::new(inner, outer)?;
    let (ny, nx) = (inner.n_y(), inner.n_x());
    let violates = |d: &CMatrix| frame.image_norm(d) > 1.0 + CONTAINMENT_TOL;

    let zero = CMatrix::zeros(ny, nx);
    if violates(&zero) {
        return Ok(Some(zero));
    }
    let extremal = frame.extremal_delta();
    if violates(&extremal) {
        return Ok(Some(extremal));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let d = random_isometry(&mut rng, ny, nx);
        if violates(&d) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Polar factor of a complex Gaussian matrix.
pub fn random_isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let g = CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let svd = g.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    u * v_t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::scalar;

    fn unit() -> Inclusion {
        Inclusion::new(scalar(0.3), scalar(1.0), scalar(1.0)).unwrap()
    }

    #[test]
    fn identical_models() {
        let m = unit();
        assert!((necessary_product(&m, &m).unwrap() - 1.0).abs() < 1e-15);
        assert!(containment_necessary(&m, &m).unwrap());
        assert!(containment_falsify(&m, &m, 200, 1).unwrap().is_none());
    }

    #[test]
    fn wider_inner_fails_necessary_condition() {
        let outer = unit();
        let inner = Inclusion::new(scalar(0.3), scalar(2.0), scalar(1.0)).unwrap();
        assert!(!containment_necessary(&inner, &outer).unwrap());
    }

    #[test]
    fn shifted_nominal_is_caught_at_zero() {
        let outer = Inclusion::new(scalar(0.0), scalar(1.5), scalar(2.0)).unwrap();
        let inner = Inclusion::new(scalar(2.0 * 1.5 * 2.0), scalar(1.5), scalar(2.0)).unwrap();
        let d = containment_falsify(&inner, &outer, 10, 0).unwrap().unwrap();
        assert_eq!(d[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn isometries_have_unit_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = random_isometry(&mut rng, 2, 3);
        let sv = d.svd(false, false).singular_values;
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn singular_outer_c_is_reported() {
        let outer = Inclusion::with_semidefinite_c(scalar(0.0), scalar(1.0), scalar(0.0), 1e-12)
            .unwrap();
        assert!(containment_necessary(&unit(), &outer).is_err());
    }
}
