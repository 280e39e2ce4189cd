//! The centering objective of the path-following method,
//!
//! ```text
//!     φ_t(z) = −t·log det X_B − log det Q′ − log det X_C − Σᵢ log sᵢ(z),
//! ```
//!
//! with value, gradient and Hessian in packed coordinates. Each matrix
//! barrier is a linear map `F(z) = Σ_k z_k E_k`; with `S = F⁻¹`,
//! `∂(−log det F)/∂z_k = −tr(S E_k)` and
//! `∂²(−log det F)/∂z_k∂z_l = tr(S E_k S E_l)`.

use nalgebra::{DMatrix, DVector};

use super::layout::{Block, Layout};
use super::problem::QipProblem;

/// Nonzero `(row, col, value)` entries of one basis matrix.
type Entries = Vec<(usize, usize, f64)>;

/// `F(z) = Σ_k z_k E_k` with each `E_k` stored as its nonzero entries.
#[derive(Debug, Clone)]
struct LinearMatrixMap {
    dim: usize,
    /// `(variable, entries)` for every variable that appears in `F`.
    terms: Vec<(usize, Entries)>,
}

impl LinearMatrixMap {
    fn build(layout: &Layout, dim: usize, place: impl Fn(Block, usize, usize) -> Option<(usize, usize, f64)>) -> Self {
        let mut terms = Vec::new();
        for (k, c) in layout.coords().iter().enumerate() {
            if let Some((i, j, v)) = place(c.block, c.row, c.col) {
                let mut entries = vec![(i, j, v)];
                if i != j {
                    entries.push((j, i, v));
                }
                terms.push((k, entries));
            }
        }
        Self { dim, terms }
    }

    fn eval(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let mut f = DMatrix::zeros(self.dim, self.dim);
        for (k, entries) in &self.terms {
            for &(i, j, v) in entries {
                f[(i, j)] += v * z[*k];
            }
        }
        f
    }

    /// `(−log det F, S = F⁻¹)`, or `None` when `F` is not positive definite.
    fn log_barrier(&self, z: &DVector<f64>) -> Option<(f64, DMatrix<f64>)> {
        let chol = self.eval(z).cholesky()?;
        let l = chol.l_dirty();
        let log_det = 2.0 * (0..self.dim).map(|i| l[(i, i)].ln()).sum::<f64>();
        Some((-log_det, chol.inverse()))
    }

    fn accumulate(&self, s: &DMatrix<f64>, weight: f64, grad: &mut DVector<f64>, hess: Option<&mut DMatrix<f64>>) {
        for (k, entries) in &self.terms {
            let g: f64 = entries.iter().map(|&(i, j, v)| v * s[(j, i)]).sum();
            grad[*k] -= weight * g;
        }
        if let Some(hess) = hess {
            for (k, ek) in &self.terms {
                for (l, el) in &self.terms {
                    if l < k {
                        continue;
                    }
                    let mut h = 0.0;
                    for &(i, j, v) in ek {
                        for &(p, q, w) in el {
                            h += v * w * s[(j, p)] * s[(q, i)];
                        }
                    }
                    hess[(*k, *l)] += weight * h;
                    if l != k {
                        hess[(*l, *k)] += weight * h;
                    }
                }
            }
        }
    }
}

/// Composite barrier objective for one value of `t`.
#[derive(Debug, Clone)]
pub struct Barrier<'a> {
    problem: &'a QipProblem,
    q_prime: LinearMatrixMap,
    xc: LinearMatrixMap,
    xb: LinearMatrixMap,
}

/// Value, gradient and Hessian at a strictly feasible point.
#[derive(Debug, Clone)]
pub struct BarrierEval {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
    pub log_det_xb: f64,
}

impl<'a> Barrier<'a> {
    pub fn new(problem: &'a QipProblem) -> Self {
        let layout = problem.layout();
        let ny = layout.n_y;
        let q_prime = LinearMatrixMap::build(layout, ny + layout.n_x, |b, r, c| match b {
            Block::XB => Some((r, c, 1.0)),
            Block::XA => Some((r, ny + c, -1.0)),
            Block::XAA => Some((ny + r, ny + c, 1.0)),
            Block::XC => None,
        });
        let xc = LinearMatrixMap::build(layout, layout.n_x, |b, r, c| (b == Block::XC).then_some((r, c, 1.0)));
        let xb = LinearMatrixMap::build(layout, ny, |b, r, c| (b == Block::XB).then_some((r, c, 1.0)));
        Self {
            problem,
            q_prime,
            xc,
            xb,
        }
    }

    /// `log det X_B` at `z`, if `X_B ≻ 0`.
    pub fn log_det_xb(&self, z: &DVector<f64>) -> Option<f64> {
        self.xb.log_barrier(z).map(|(v, _)| -v)
    }

    /// Whether `Q′ ≻ 0`, `X_C ≻ 0` and every slack is positive.
    pub fn strictly_feasible(&self, z: &DVector<f64>) -> bool {
        self.value(z, 1.0).is_some()
    }

    /// `φ_t(z)`, or `None` outside the domain.
    pub fn value(&self, z: &DVector<f64>, t: f64) -> Option<f64> {
        let slacks = self.problem.packed_rows() * z;
        if slacks.iter().any(|&s| !(s > 0.0)) {
            return None;
        }
        let (vq, _) = self.q_prime.log_barrier(z)?;
        let (vc, _) = self.xc.log_barrier(z)?;
        let (vb, _) = self.xb.log_barrier(z)?;
        Some(t * vb + vq + vc - slacks.iter().map(|s| s.ln()).sum::<f64>())
    }

    /// `∇φ_t(z)`.
    pub fn gradient(&self, z: &DVector<f64>, t: f64) -> Option<DVector<f64>> {
        self.eval_inner(z, t, false).map(|e| e.gradient)
    }

    pub fn evaluate(&self, z: &DVector<f64>, t: f64) -> Option<BarrierEval> {
        self.eval_inner(z, t, true)
    }

    fn eval_inner(&self, z: &DVector<f64>, t: f64, with_hessian: bool) -> Option<BarrierEval> {
        let rows = self.problem.packed_rows();
        let slacks = rows * z;
        if slacks.iter().any(|&s| !(s > 0.0)) {
            return None;
        }
        let (vq, sq) = self.q_prime.log_barrier(z)?;
        let (vc, sc) = self.xc.log_barrier(z)?;
        let (vb, sb) = self.xb.log_barrier(z)?;
        let n = z.len();
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(if with_hessian { n } else { 0 }, if with_hessian { n } else { 0 });
        for (map, s, w) in [(&self.q_prime, &sq, 1.0), (&self.xc, &sc, 1.0), (&self.xb, &sb, t)] {
            map.accumulate(s, w, &mut grad, with_hessian.then_some(&mut hess));
        }
        // Linear inequalities: −Σ log(gᵢᵀz).
        let inv = slacks.map(|s| 1.0 / s);
        grad -= rows.transpose() * &inv;
        if with_hessian {
            let scaled = DMatrix::from_fn(rows.nrows(), rows.ncols(), |i, j| rows[(i, j)] * inv[i]);
            hess += scaled.transpose() * &scaled;
        }
        let value = t * vb + vq + vc - slacks.iter().map(|s| s.ln()).sum::<f64>();
        Some(BarrierEval {
            value,
            gradient: grad,
            hessian: hess,
            log_det_xb: -vb,
        })
    }
}
