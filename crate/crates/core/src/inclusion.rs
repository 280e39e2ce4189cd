//! Norm-bounded linear inclusions `y ∈ {(A + BΔC)x : ‖Δ‖ ≤ 1}`, their
//! quadratic-form description, and the split semidefinite decomposition
//! (SS-DD) used as the convex search space.
//!
//! A data pair `ξ = (y, x)` belongs to the inclusion exactly when
//! `ξ* Q ξ ≥ 0` with
//!
//! ```text
//!     Q = [ -B⁻ᵀB⁻¹        B⁻ᵀB⁻¹A          ]
//!         [  AᵀB⁻ᵀB⁻¹      CᵀC - AᵀB⁻ᵀB⁻¹A   ]
//! ```
//!
//! Because `Q` is real symmetric, `ξ*Qξ = Re(ξ)ᵀQ Re(ξ) + Im(ξ)ᵀQ Im(ξ)`:
//! the cross terms `Re(ξ)ᵀQ Im(ξ) - Im(ξ)ᵀQ Re(ξ)` cancel. Every inequality
//! handed to the solver uses this real form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Default relative conditioning floor for `B` and `C`.
pub const DEFAULT_COND_TOL: f64 = 1e-12;

/// Default relative tolerance on the specialness residual when converting a
/// solver-produced SS-DD back to inclusion matrices.
pub const DEFAULT_SPECIALNESS_TOL: f64 = 1e-6;

/// Relative symmetry tolerance for quadratic forms and SS-DD blocks.
const SYMMETRY_TOL: f64 = 1e-12;

fn check_symmetric(name: &str, m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(QipError::Dimension(format!(
            "{name} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL * scale && asym > 0.0 {
        return Err(QipError::InvalidModel(format!(
            "{name} is not symmetric (asymmetry {asym:.3e})"
        )));
    }
    Ok(())
}

/// A stacked complex data pair `ξ = (y, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint {
    pub y: CVector,
    pub x: CVector,
}

impl DataPoint {
    pub fn new(y: CVector, x: CVector) -> Self {
        Self { y, x }
    }

    /// Real-valued convenience constructor.
    pub fn real(y: &[f64], x: &[f64]) -> Self {
        Self {
            y: CVector::from_iterator(y.len(), y.iter().map(|&v| Complex64::new(v, 0.0))),
            x: CVector::from_iterator(x.len(), x.iter().map(|&v| Complex64::new(v, 0.0))),
        }
    }

    pub fn n_y(&self) -> usize {
        self.y.len()
    }

    pub fn n_x(&self) -> usize {
        self.x.len()
    }

    pub fn stacked(&self) -> CVector {
        let mut xi = CVector::zeros(self.y.len() + self.x.len());
        xi.rows_mut(0, self.y.len()).copy_from(&self.y);
        xi.rows_mut(self.y.len(), self.x.len()).copy_from(&self.x);
        xi
    }
}

/// Real symmetric quadratic form on stacked `(y, x)` vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricForm {
    q: DMatrix<f64>,
    n_y: usize,
    n_x: usize,
}

impl QuadricForm {
    pub fn new(q: DMatrix<f64>, n_y: usize, n_x: usize) -> Result<Self> {
        if q.nrows() != n_y + n_x {
            return Err(QipError::Dimension(format!(
                "Q is {}x{}, expected {}",
                q.nrows(),
                q.ncols(),
                n_y + n_x
            )));
        }
        check_symmetric("Q", &q)?;
        Ok(Self { q, n_y, n_x })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    /// `ξ* Q ξ`, evaluated through the real/imaginary split.
    pub fn value(&self, p: &DataPoint) -> f64 {
        let xi = p.stacked();
        let re = xi.map(|c| c.re);
        let im = xi.map(|c| c.im);
        re.dot(&(&self.q * &re)) + im.dot(&(&self.q * &im))
    }

    /// Whether `ξ*Qξ + offset` is nonnegative up to a rounding-level tolerance.
    pub fn membership(&self, p: &DataPoint, offset: f64) -> bool {
        assert_eq!(p.n_y(), self.n_y, "output dimension mismatch");
        assert_eq!(p.n_x(), self.n_x, "input dimension mismatch");
        let value = self.value(p) + offset;
        let scale = p.stacked().norm_squared() * self.q.amax() + offset.abs();
        value >= -1e-12 * scale
    }
}

/// A norm-bounded linear inclusion `y ∈ {(A + BΔC)x : ‖Δ‖ ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inclusion {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    c_invertible: bool,
}

impl Inclusion {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(a, b, c, DEFAULT_COND_TOL)
    }

    pub fn with_tolerance(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        cond_tol: f64,
    ) -> Result<Self> {
        let m = Self::with_semidefinite_c(a, b, c, cond_tol)?;
        if !m.c_invertible {
            return Err(QipError::InvalidModel("C is singular".into()));
        }
        Ok(m)
    }

    /// Like [`Inclusion::new`] but accepts a singular `C`; the result records
    /// whether `C` is invertible. Fits over an input basis can legitimately
    /// produce a rank-deficient `CᵀC`.
    pub fn with_semidefinite_c(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        cond_tol: f64,
    ) -> Result<Self> {
        if b.nrows() != b.ncols() || c.nrows() != c.ncols() {
            return Err(QipError::Dimension("B and C must be square".into()));
        }
        if a.nrows() != b.nrows() || a.ncols() != c.nrows() {
            return Err(QipError::Dimension(format!(
                "A is {}x{} but B is {}x{} and C is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols()
            )));
        }
        if a.iter().chain(b.iter()).chain(c.iter()).any(|v| !v.is_finite()) {
            return Err(QipError::InvalidModel("non-finite entry".into()));
        }
        if !linalg::is_well_conditioned(&b, cond_tol) {
            return Err(QipError::InvalidModel("B is singular".into()));
        }
        let c_invertible = linalg::is_well_conditioned(&c, cond_tol);
        Ok(Self {
            a,
            b,
            c,
            c_invertible,
        })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn n_y(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_x(&self) -> usize {
        self.a.ncols()
    }

    pub fn c_is_invertible(&self) -> bool {
        self.c_invertible
    }

    fn b_inv(&self) -> DMatrix<f64> {
        self.b
            .clone()
            .try_inverse()
            .expect("B invertibility is checked at construction")
    }

    /// `B⁻ᵀB⁻¹`.
    fn b_gram_inv(&self) -> DMatrix<f64> {
        let bi = self.b_inv();
        linalg::symmetrize(&(bi.transpose() * bi))
    }

    /// The quadratic form whose nonnegativity is equivalent to membership.
    pub fn quadric(&self) -> QuadricForm {
        let (ny, nx) = (self.n_y(), self.n_x());
        let xb = self.b_gram_inv();
        let xa = &xb * &self.a;
        let lower_right =
            linalg::symmetrize(&(self.c.transpose() * &self.c - self.a.transpose() * &xa));
        let mut q = DMatrix::zeros(ny + nx, ny + nx);
        q.view_mut((0, 0), (ny, ny)).copy_from(&(-&xb));
        q.view_mut((0, ny), (ny, nx)).copy_from(&xa);
        q.view_mut((ny, 0), (nx, ny)).copy_from(&xa.transpose());
        q.view_mut((ny, ny), (nx, nx)).copy_from(&lower_right);
        QuadricForm {
            q,
            n_y: ny,
            n_x: nx,
        }
    }

    /// The special-case SS-DD that represents this inclusion.
    pub fn to_ssdd(&self) -> Ssdd {
        let xb = self.b_gram_inv();
        let xa = &xb * &self.a;
        let xaa = linalg::symmetrize(&(self.a.transpose() * &xa));
        let xc = linalg::symmetrize(&(self.c.transpose() * &self.c));
        Ssdd { xb, xa, xaa, xc }
    }

    /// Whether `p` belongs to the (degenerate) inclusion.
    pub fn contains(&self, p: &DataPoint) -> bool {
        self.quadric().membership(p, 0.0)
    }

    /// The rank-one contraction `Δ = B⁻¹(y - Ax)(Cx)*/‖Cx‖²` with
    /// `y = Ax + BΔCx`.
    pub fn witness_delta(&self, p: &DataPoint) -> Result<CMatrix> {
        if p.n_y() != self.n_y() || p.n_x() != self.n_x() {
            return Err(QipError::Dimension("data point does not match model".into()));
        }
        let a = linalg::to_complex(&self.a);
        let residual = &p.y - &a * &p.x;
        let cx = linalg::to_complex(&self.c) * &p.x;
        let cx_norm2 = cx.norm_squared();
        let cx_floor = f64::EPSILON * self.c.norm() * p.x.norm();
        if cx_norm2.sqrt() <= cx_floor {
            let scale = p.y.norm() + self.a.norm() * p.x.norm();
            if residual.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Ok(CMatrix::zeros(self.n_y(), self.n_x()));
            }
            return Err(QipError::NoWitness);
        }
        let u = linalg::to_complex(&self.b_inv()) * residual;
        Ok(u * cx.adjoint() / Complex64::new(cx_norm2, 0.0))
    }

    /// Generalized cone width `GM{σ(B)} · ‖C‖_F`.
    pub fn cone_width(&self) -> f64 {
        let sv = linalg::singular_values(&self.b);
        let log_gm = sv.iter().map(|s| s.ln()).sum::<f64>() / sv.len() as f64;
        log_gm.exp() * self.c.norm()
    }
}

/// Split semidefinite decomposition `(X_B, X_A, X_AA, X_C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ssdd {
    pub xb: DMatrix<f64>,
    pub xa: DMatrix<f64>,
    pub xaa: DMatrix<f64>,
    pub xc: DMatrix<f64>,
}

impl Ssdd {
    pub fn new(
        xb: DMatrix<f64>,
        xa: DMatrix<f64>,
        xaa: DMatrix<f64>,
        xc: DMatrix<f64>,
    ) -> Result<Self> {
        check_symmetric("X_B", &xb)?;
        check_symmetric("X_AA", &xaa)?;
        check_symmetric("X_C", &xc)?;
        if xa.nrows() != xb.nrows() || xa.ncols() != xaa.nrows() || xc.nrows() != xaa.nrows() {
            return Err(QipError::Dimension("inconsistent SS-DD block sizes".into()));
        }
        Ok(Self { xb, xa, xaa, xc })
    }

    /// Scalar convenience constructor (`n_y = n_x = 1`).
    pub fn scalar(xb: f64, xa: f64, xaa: f64, xc: f64) -> Self {
        let s = |v| DMatrix::from_element(1, 1, v);
        Self {
            xb: s(xb),
            xa: s(xa),
            xaa: s(xaa),
            xc: s(xc),
        }
    }

    pub fn n_y(&self) -> usize {
        self.xb.nrows()
    }

    pub fn n_x(&self) -> usize {
        self.xc.nrows()
    }

    /// `Q′ = [[X_B, -X_A], [-X_Aᵀ, X_AA]]`.
    pub fn q_prime(&self) -> DMatrix<f64> {
        let (ny, nx) = (self.n_y(), self.n_x());
        let mut m = DMatrix::zeros(ny + nx, ny + nx);
        m.view_mut((0, 0), (ny, ny)).copy_from(&self.xb);
        m.view_mut((0, ny), (ny, nx)).copy_from(&(-&self.xa));
        m.view_mut((ny, 0), (nx, ny)).copy_from(&(-self.xa.transpose()));
        m.view_mut((ny, ny), (nx, nx)).copy_from(&self.xaa);
        m
    }

    /// The assembled form `Q = [[-X_B, X_A], [X_Aᵀ, X_C - X_AA]]`.
    pub fn quadric(&self) -> QuadricForm {
        let (ny, nx) = (self.n_y(), self.n_x());
        let mut q = DMatrix::zeros(ny + nx, ny + nx);
        q.view_mut((0, 0), (ny, ny)).copy_from(&(-&self.xb));
        q.view_mut((0, ny), (ny, nx)).copy_from(&self.xa);
        q.view_mut((ny, 0), (nx, ny)).copy_from(&self.xa.transpose());
        q.view_mut((ny, ny), (nx, nx)).copy_from(&(&self.xc - &self.xaa));
        QuadricForm {
            q: linalg::symmetrize(&q),
            n_y: ny,
            n_x: nx,
        }
    }

    /// `Q′ ⪰ 0` and `X_C ⪰ 0`, each to within `-tol` on the smallest eigenvalue.
    pub fn satisfies_lmis(&self, tol: f64) -> bool {
        linalg::min_eigenvalue(&self.q_prime()) >= -tol && linalg::min_eigenvalue(&self.xc) >= -tol
    }

    fn xb_cholesky(&self) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
        self.xb
            .clone()
            .cholesky()
            .ok_or_else(|| QipError::DegenerateModel("X_B is not positive definite".into()))
    }

    /// Specialness residual `X_AA - X_Aᵀ X_B⁻¹ X_A`.
    pub fn residual(&self) -> Result<DMatrix<f64>> {
        let chol = self.xb_cholesky()?;
        let solved = chol.solve(&self.xa);
        Ok(linalg::symmetrize(&(&self.xaa - self.xa.transpose() * solved)))
    }

    /// Whether `‖X_AA - X_AᵀX_B⁻¹X_A‖₂ ≤ tol · max(1, ‖X_AA‖₂)`.
    pub fn certify_specialness(&self, tol: f64) -> bool {
        match self.residual() {
            Ok(r) => {
                linalg::spectral_norm(&r) <= tol * linalg::spectral_norm(&self.xaa).max(1.0)
            }
            Err(_) => false,
        }
    }

    /// Generalized cone width `det(X_B⁻¹)^(1/2n_y) · √tr(X_C)`.
    pub fn cone_width(&self) -> Result<f64> {
        let log_det = linalg::log_det_pd(&self.xb).ok_or(QipError::InfiniteWidth)?;
        let ny = self.n_y() as f64;
        Ok((-log_det / (2.0 * ny)).exp() * self.xc.trace().max(0.0).sqrt())
    }

    /// `A = X_B⁻¹X_A`.
    pub fn nominal(&self) -> Result<DMatrix<f64>> {
        Ok(self.xb_cholesky()?.solve(&self.xa))
    }

    /// Convert back to inclusion matrices using Cholesky factors:
    /// `B = L⁻ᵀ` with `X_B = LLᵀ`, `C = L_Cᵀ` with `X_C = L_C L_Cᵀ`, `A = X_B⁻¹X_A`.
    pub fn to_inclusion(&self) -> Result<Inclusion> {
        self.to_inclusion_with_tol(DEFAULT_SPECIALNESS_TOL)
    }

    pub fn to_inclusion_with_tol(&self, tol: f64) -> Result<Inclusion> {
        let chol_b = self.xb_cholesky()?;
        let chol_c = self
            .xc
            .clone()
            .cholesky()
            .ok_or_else(|| QipError::DegenerateModel("X_C is not positive definite".into()))?;
        self.check_special(tol)?;
        let b = chol_b
            .l()
            .transpose()
            .try_inverse()
            .ok_or_else(|| QipError::DegenerateModel("X_B factor is singular".into()))?;
        let c = chol_c.l().transpose();
        let a = chol_b.solve(&self.xa);
        Inclusion::with_tolerance(a, b, c, 0.0)
    }

    /// Conversion that tolerates a singular `X_C`, taking `C` as the PSD
    /// factor with `CᵀC = X_C`.
    pub fn to_inclusion_semidefinite(&self, tol: f64) -> Result<Inclusion> {
        let chol_b = self.xb_cholesky()?;
        self.check_special(tol)?;
        let b = chol_b
            .l()
            .transpose()
            .try_inverse()
            .ok_or_else(|| QipError::DegenerateModel("X_B factor is singular".into()))?;
        let c = linalg::psd_factor(&self.xc);
        let a = chol_b.solve(&self.xa);
        Inclusion::with_semidefinite_c(a, b, c, DEFAULT_COND_TOL)
    }

    fn check_special(&self, tol: f64) -> Result<()> {
        let r = self.residual()?;
        let norm = linalg::spectral_norm(&r);
        if norm > tol * linalg::spectral_norm(&self.xaa).max(1.0) {
            return Err(QipError::NotAnInclusion { residual: norm });
        }
        Ok(())
    }
}

/// Scalar helper for tests and examples.
pub fn scalar(v: f64) -> DMatrix<f64> {
    DMatrix::from_element(1, 1, v)
}

/// Complex vector from `(re, im)` pairs.
pub fn cvec(parts: &[(f64, f64)]) -> CVector {
    DVector::from_iterator(parts.len(), parts.iter().map(|&(r, i)| Complex64::new(r, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
        DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_inclusion(rng: &mut ChaCha8Rng, ny: usize, nx: usize) -> Inclusion {
        let b = random_matrix(rng, ny, ny) + DMatrix::identity(ny, ny) * 2.0;
        let c = random_matrix(rng, nx, nx) + DMatrix::identity(nx, nx) * 2.0;
        Inclusion::new(random_matrix(rng, ny, nx), b, c).unwrap()
    }

    #[test]
    fn quadric_identity_case() {
        let m = Inclusion::new(scalar(0.0), scalar(1.0), scalar(1.0)).unwrap();
        let q = m.quadric();
        assert_eq!(q.matrix(), &DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn quadric_scalar_substitution() {
        let m = Inclusion::new(scalar(2.0), scalar(1.0), scalar(1.0)).unwrap();
        let q = m.quadric();
        assert_eq!(q.matrix(), &DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 2.0, -3.0]));
    }

    #[test]
    fn quadric_matches_elementwise_block_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_inclusion(&mut rng, 2, 2);
        // Independent evaluation: explicit scalar loops, explicit 2x2 inverse.
        let b = m.b();
        let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
        let bi = [
            [b[(1, 1)] / det, -b[(0, 1)] / det],
            [-b[(1, 0)] / det, b[(0, 0)] / det],
        ];
        let mut g = [[0.0; 2]; 2]; // B^-T B^-1
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = bi.iter().map(|row| row[i] * row[j]).sum();
            }
        }
        let a = m.a();
        let c = m.c();
        let q = m.quadric();
        for i in 0..2 {
            for j in 0..2 {
                assert!((q.matrix()[(i, j)] + g[i][j]).abs() < 1e-12);
                let mut ga = 0.0;
                for k in 0..2 {
                    ga += g[i][k] * a[(k, j)];
                }
                assert!((q.matrix()[(i, 2 + j)] - ga).abs() < 1e-12);
                assert!((q.matrix()[(2 + j, i)] - ga).abs() < 1e-12);
                let mut ctc = 0.0;
                let mut aga = 0.0;
                for k in 0..2 {
                    ctc += c[(k, i)] * c[(k, j)];
                    for l in 0..2 {
                        aga += a[(k, i)] * g[k][l] * a[(l, j)];
                    }
                }
                assert!((q.matrix()[(2 + i, 2 + j)] - (ctc - aga)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_b_is_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let err = Inclusion::new(DMatrix::zeros(2, 1), b, scalar(1.0)).unwrap_err();
        assert!(matches!(err, QipError::InvalidModel(_)));
        let err = Inclusion::new(scalar(0.0), scalar(1.0), scalar(0.0)).unwrap_err();
        assert!(matches!(err, QipError::InvalidModel(_)));
    }

    #[test]
    fn ssdd_scalar_cases() {
        let s = Inclusion::new(scalar(0.0), scalar(1.0), scalar(1.0)).unwrap().to_ssdd();
        assert_eq!(s, Ssdd::scalar(1.0, 0.0, 0.0, 1.0));
        let s = Inclusion::new(scalar(2.0), scalar(1.0), scalar(1.0)).unwrap().to_ssdd();
        assert_eq!(s, Ssdd::scalar(1.0, 2.0, 4.0, 1.0));
    }

    #[test]
    fn ssdd_assembles_to_the_same_quadric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_inclusion(&mut rng, 3, 2);
            let q1 = m.quadric();
            let q2 = m.to_ssdd().quadric();
            let diff = (q1.matrix() - q2.matrix()).amax();
            assert!(diff <= 1e-10 * q1.matrix().amax());
            assert!(m.to_ssdd().residual().unwrap().amax() <= 1e-10 * m.to_ssdd().xaa.amax().max(1.0));
        }
    }

    #[test]
    fn inclusion_from_ssdd_cases() {
        let m = Ssdd::scalar(1.0, 0.0, 0.0, 1.0).to_inclusion().unwrap();
        assert_eq!((m.a()[(0, 0)], m.b()[(0, 0)], m.c()[(0, 0)]), (0.0, 1.0, 1.0));
        let m = Ssdd::scalar(4.0, 0.0, 0.0, 1.0).to_inclusion().unwrap();
        assert_eq!((m.a()[(0, 0)], m.b()[(0, 0)], m.c()[(0, 0)]), (0.0, 0.5, 1.0));
    }

    #[test]
    fn inclusion_from_ssdd_errors() {
        let err = Ssdd::scalar(0.0, 0.0, 0.0, 1.0).to_inclusion().unwrap_err();
        assert!(matches!(err, QipError::DegenerateModel(_)));
        let err = Ssdd::scalar(1.0, 0.0, 0.0, 0.0).to_inclusion().unwrap_err();
        assert!(matches!(err, QipError::DegenerateModel(_)));
        let err = Ssdd::scalar(1.0, 0.0, 1.0, 1.0).to_inclusion().unwrap_err();
        assert!(matches!(err, QipError::NotAnInclusion { .. }));
    }

    #[test]
    fn membership_examples() {
        let q = QuadricForm::new(DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]), 1, 1)
            .unwrap();
        let p = DataPoint::real(&[0.5], &[1.0]);
        assert!((q.value(&p) - 0.75).abs() < 1e-15);
        assert!(q.membership(&p, 0.0));
        let p = DataPoint::real(&[2.0], &[1.0]);
        assert!((q.value(&p) + 3.0).abs() < 1e-15);
        assert!(!q.membership(&p, 0.0));
        let p = DataPoint::new(cvec(&[(1.0, 0.0)]), cvec(&[(0.0, 1.0)]));
        assert_eq!(q.value(&p), 0.0);
        assert!(q.membership(&p, 0.0));
    }

    #[test]
    fn real_split_matches_complex_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let m = random_inclusion(&mut rng, 2, 3);
            let q = m.quadric();
            let p = DataPoint::new(
                CVector::from_fn(2, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
                CVector::from_fn(3, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
            );
            let direct = linalg::hermitian_form(q.matrix(), &p.stacked());
            assert!(direct.im.abs() < 1e-12 * (1.0 + direct.re.abs()));
            assert!((direct.re - q.value(&p)).abs() < 1e-12 * (1.0 + direct.re.abs()));
        }
    }

    #[test]
    fn witness_examples() {
        let m = Inclusion::new(scalar(0.0), scalar(1.0), scalar(1.0)).unwrap();
        let d = m.witness_delta(&DataPoint::real(&[0.5], &[1.0])).unwrap();
        assert!((d[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let m = Inclusion::new(scalar(3.0), scalar(2.0), scalar(1.0)).unwrap();
        let d = m.witness_delta(&DataPoint::real(&[6.0], &[2.0])).unwrap();
        assert_eq!(d[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn witness_with_zero_input() {
        let m = Inclusion::new(scalar(3.0), scalar(2.0), scalar(1.0)).unwrap();
        let d = m.witness_delta(&DataPoint::real(&[0.0], &[0.0])).unwrap();
        assert_eq!(d.norm(), 0.0);
        let err = m.witness_delta(&DataPoint::real(&[1.0], &[0.0])).unwrap_err();
        assert!(matches!(err, QipError::NoWitness));
    }

    #[test]
    fn cone_width_examples() {
        let s = Ssdd::new(
            DMatrix::identity(2, 2),
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 2),
            DMatrix::from_row_slice(2, 2, &[0.25, 0.1, 0.1, 0.75]),
        )
        .unwrap();
        assert!((s.cone_width().unwrap() - 1.0).abs() < 1e-15);
        assert!((Ssdd::scalar(4.0, 0.0, 0.0, 1.0).cone_width().unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            Ssdd::scalar(0.0, 0.0, 0.0, 1.0).cone_width(),
            Err(QipError::InfiniteWidth)
        ));

        let m = Inclusion::new(DMatrix::zeros(2, 2), DMatrix::identity(2, 2), DMatrix::identity(2, 2))
            .unwrap();
        assert!((m.cone_width() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn residual_examples() {
        let s = Ssdd::scalar(1.0, 0.0, 1.0, 1.0);
        assert_eq!(s.residual().unwrap()[(0, 0)], 1.0);
        assert!(!s.certify_specialness(1e-10));
        assert!(Ssdd::scalar(0.0, 0.0, 0.0, 1.0).residual().is_err());
    }

    #[test]
    fn specialness_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_inclusion(&mut rng, 2, 3);
        let mut s = m.to_ssdd();
        assert!(s.certify_specialness(1e-10));
        s.xaa += DMatrix::identity(3, 3);
        assert!(!s.certify_specialness(1e-10));
    }
}
