use nalgebra::{DMatrix, DVector};

use crate::error::{QipError, Result};
use crate::inclusion::{DataPoint, Ssdd};
use crate::linalg;
use crate::noise::NoiseSummary;

use super::layout::Layout;

/// How measurement noise relaxes each inclusion inequality.
#[derive(Debug, Clone)]
pub enum NoiseModel {
    /// Exact data: the degenerate program.
    None,
    /// One `Σ_η` (2n_y × 2n_y) shared by every point.
    Shared(DMatrix<f64>),
    /// One `Σ_η` per point.
    PerPoint(Vec<DMatrix<f64>>),
    /// A fixed `n_y × n_y` matrix `M` added as `⟨M, X_B⟩` to every row,
    /// bypassing `α` and `Σ_η`.
    DirectOffset(DMatrix<f64>),
}

impl NoiseModel {
    pub fn from_summaries(summaries: &[NoiseSummary]) -> Self {
        NoiseModel::PerPoint(summaries.iter().map(|s| s.sigma_eta.clone()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Degenerate,
    NonDegenerate,
}

/// One inclusion inequality `⟨G_B,X_B⟩ + ⟨G_A,X_A⟩ + ⟨G_AA,X_AA⟩ + ⟨G_C,X_C⟩ ≥ 0`.
///
/// For a point `(y, x)`: `G_B = −Re(yy*) + offset`, `G_A = 2Re(yx*)`,
/// `G_AA = −Re(xx*)`, `G_C = Re(xx*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFunctional {
    pub xb: DMatrix<f64>,
    pub xa: DMatrix<f64>,
    pub xaa: DMatrix<f64>,
    pub xc: DMatrix<f64>,
    /// The noise part of `xb`, i.e. `α·(Σ₁₁ + Σ₂₂)`.
    pub offset: DMatrix<f64>,
}

impl RowFunctional {
    pub fn from_point(p: &DataPoint, offset: DMatrix<f64>) -> Self {
        let yy = linalg::real_outer(&p.y, &p.y);
        let xx = linalg::real_outer(&p.x, &p.x);
        Self {
            xb: -yy + &offset,
            xa: linalg::real_outer(&p.y, &p.x) * 2.0,
            xaa: -&xx,
            xc: xx,
            offset,
        }
    }

    pub fn value(&self, s: &Ssdd) -> f64 {
        linalg::frobenius_inner(&self.xb, &s.xb)
            + linalg::frobenius_inner(&self.xa, &s.xa)
            + linalg::frobenius_inner(&self.xaa, &s.xaa)
            + linalg::frobenius_inner(&self.xc, &s.xc)
    }

    /// Sum of the absolute values of the four block contributions.
    pub fn scale(&self, s: &Ssdd) -> f64 {
        linalg::frobenius_inner(&self.xb, &s.xb).abs()
            + linalg::frobenius_inner(&self.offset, &s.xb).abs()
            + linalg::frobenius_inner(&self.xa, &s.xa).abs()
            + linalg::frobenius_inner(&self.xaa, &s.xaa).abs()
            + linalg::frobenius_inner(&self.xc, &s.xc).abs()
    }

    /// `tr(offset)`: the offset evaluated at `X_B = I`.
    pub fn offset_trace(&self) -> f64 {
        self.offset.trace()
    }

    /// `x*x`, recovered from the `X_C` coefficient.
    pub fn input_energy(&self) -> f64 {
        self.xc.trace()
    }

    /// `y*y`, recovered from the `X_B` coefficient.
    pub fn output_energy(&self) -> f64 {
        -(&self.xb - &self.offset).trace()
    }
}

/// An assembled quadric inclusion program.
#[derive(Debug, Clone)]
pub struct QipProblem {
    n_y: usize,
    n_x: usize,
    rows: Vec<RowFunctional>,
    mode: Mode,
    layout: Layout,
    packed: DMatrix<f64>,
    relation_residual: Option<f64>,
}

impl QipProblem {
    /// Build a program directly from inequality rows.
    pub fn from_rows(n_y: usize, n_x: usize, rows: Vec<RowFunctional>) -> Result<Self> {
        if rows.is_empty() {
            return Err(QipError::InsufficientData("no data points".into()));
        }
        let layout = Layout::new(n_y, n_x);
        let mut packed = DMatrix::zeros(rows.len(), layout.len());
        for (i, r) in rows.iter().enumerate() {
            if r.xb.shape() != (n_y, n_y) || r.xa.shape() != (n_y, n_x) || r.xc.shape() != (n_x, n_x)
            {
                return Err(QipError::Dimension(format!("row {i} has inconsistent blocks")));
            }
            let g = layout.functional(&r.xb, &r.xa, &r.xaa, &r.xc);
            if g.iter().any(|v| !v.is_finite()) {
                return Err(QipError::InvalidModel(format!("row {i} has non-finite coefficients")));
            }
            packed.set_row(i, &g.transpose());
        }
        let mode = if rows.iter().all(|r| r.offset.iter().all(|&v| v == 0.0)) {
            Mode::Degenerate
        } else {
            Mode::NonDegenerate
        };
        Ok(Self {
            n_y,
            n_x,
            rows,
            mode,
            layout,
            packed,
            relation_residual: None,
        })
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn rows(&self) -> &[RowFunctional] {
        &self.rows
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Row-major packed inequality coefficients (`rows × vars`).
    pub fn packed_rows(&self) -> &DMatrix<f64> {
        &self.packed
    }

    /// Total barrier parameter `(n_y + n_x) + n_x + #rows`.
    pub fn barrier_parameter(&self) -> f64 {
        (self.n_y + 2 * self.n_x + self.rows.len()) as f64
    }

    /// Relative residual of the best exact linear relation in the data, when
    /// assembled from points; see [`relation_residual`].
    pub fn relation_residual(&self) -> Option<f64> {
        self.relation_residual
    }

    /// Inequality slacks at `s`.
    pub fn slacks(&self, s: &Ssdd) -> DVector<f64> {
        &self.packed * self.layout.pack(s)
    }
}

/// Assemble one inequality row per data point, with the noise offset
/// `α·tr[Σ_η(I₂⊗X_B)]` folded into the `X_B` coefficient.
pub fn assemble(data: &[DataPoint], noise: &NoiseModel, alpha: f64) -> Result<QipProblem> {
    let first = data
        .first()
        .ok_or_else(|| QipError::InsufficientData("no data points".into()))?;
    let (ny, nx) = (first.n_y(), first.n_x());
    if data.iter().any(|p| p.n_y() != ny || p.n_x() != nx) {
        return Err(QipError::Dimension("data points differ in dimension".into()));
    }
    if !(alpha >= 0.0) {
        return Err(QipError::InvalidModel(format!("alpha must be nonnegative, got {alpha}")));
    }
    let check_sigma = |sigma: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        if sigma.shape() != (2 * ny, 2 * ny) {
            return Err(QipError::Dimension(format!(
                "Σ_η must be {0}x{0}, got {1}x{2}",
                2 * ny,
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let scale = sigma.amax();
        if linalg::min_eigenvalue(sigma) < -1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(QipError::InvalidModel("Σ_η is not positive semidefinite".into()));
        }
        let n = ny;
        Ok(linalg::symmetrize(
            &(sigma.view((0, 0), (n, n)) + sigma.view((n, n), (n, n))),
        ) * alpha)
    };
    let offsets: Vec<DMatrix<f64>> = match noise {
        NoiseModel::None => vec![DMatrix::zeros(ny, ny); data.len()],
        NoiseModel::Shared(sigma) => vec![check_sigma(sigma)?; data.len()],
        NoiseModel::PerPoint(sigmas) => {
            if sigmas.len() != data.len() {
                return Err(QipError::Dimension(format!(
                    "{} noise summaries for {} points",
                    sigmas.len(),
                    data.len()
                )));
            }
            sigmas.iter().map(check_sigma).collect::<Result<_>>()?
        }
        NoiseModel::DirectOffset(m) => {
            if m.shape() != (ny, ny) {
                return Err(QipError::Dimension("direct offset must be n_y x n_y".into()));
            }
            vec![linalg::symmetrize(m); data.len()]
        }
    };
    let degenerate = offsets.iter().all(|m| m.iter().all(|&v| v == 0.0));
    if degenerate {
        if let Some(index) = data
            .iter()
            .position(|p| p.x.iter().all(|v| v.norm() == 0.0) && p.y.iter().any(|v| v.norm() != 0.0))
        {
            return Err(QipError::InfeasiblePoint { index });
        }
    }
    let rows = data
        .iter()
        .zip(offsets)
        .map(|(p, off)| RowFunctional::from_point(p, off))
        .collect();
    let mut problem = QipProblem::from_rows(ny, nx, rows)?;
    problem.relation_residual = Some(relation_residual(data));
    Ok(problem)
}

/// `min_v ‖vᵀ(Y − ÂX)‖ / ‖vᵀY‖` over output directions `v`, where `Y` and `X`
/// stack the real and imaginary parts of the data as columns and `Â` is the
/// real least-squares fit. Zero means some output combination is an exact
/// real-linear function of the inputs.
pub fn relation_residual(data: &[DataPoint]) -> f64 {
    let (ny, nx) = (data[0].n_y(), data[0].n_x());
    let cols = 2 * data.len();
    let mut y = DMatrix::zeros(ny, cols);
    let mut x = DMatrix::zeros(nx, cols);
    for (k, p) in data.iter().enumerate() {
        y.set_column(2 * k, &p.y.map(|v| v.re));
        y.set_column(2 * k + 1, &p.y.map(|v| v.im));
        x.set_column(2 * k, &p.x.map(|v| v.re));
        x.set_column(2 * k + 1, &p.x.map(|v| v.im));
    }
    // Project the rows of Y off the row space of X.
    let svd = x.transpose().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let cutoff = f64::EPSILON * cols.max(nx) as f64 * smax;
    let mut r = y.clone();
    for (j, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let uj = u.column(j);
            r -= (&y * uj) * uj.transpose();
        }
    }
    // Whiten by Y: with Yᵀ = QT, min ‖wᵀT⁻ᵀR‖ over unit w.
    let t = y.transpose().qr().r();
    let tsv = linalg::singular_values(&t);
    if tsv.min() <= f64::EPSILON * tsv.max() {
        return 0.0;
    }
    match t.transpose().solve_upper_triangular(&r).or_else(|| t.transpose().lu().solve(&r)) {
        Some(w) => linalg::singular_values(&w).min(),
        None => 0.0,
    }
}
