//! Primal path-following barrier method for the inclusion program.
//!
//! Each centering step minimizes `φ_t` subject to `tr X_C = 1` by Newton's
//! method with the equality kept in the KKT system; `t` grows by `barrier_mu`
//! between centerings.

use log::debug;
use nalgebra::{DMatrix, DVector};

use crate::error::{QipError, Result};
use crate::inclusion::Ssdd;
use crate::linalg;

use super::barrier::{Barrier, BarrierEval};
use super::kkt::{check_kkt, KktSummary};
use super::problem::{Mode, QipProblem};

/// Rows with slack at most this fraction of their scale are reported active.
pub const ACTIVE_REL_TOL: f64 = 1e-6;

const ARMIJO: f64 = 0.01;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-14;
/// Below this decrement the full Newton step is taken without a descent test.
const QUADRATIC_REGION: f64 = 0.25;
const ROUNDOFF_FACTOR: f64 = 100.0;
/// Relation residuals at or below this count as exact.
const EXACT_RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub gap_tol: f64,
    pub barrier_mu: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// `None` means `200·n_y`.
    pub objective_cap: Option<f64>,
    pub t0: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            barrier_mu: 10.0,
            newton_tol: 1e-10,
            max_newton: 500,
            objective_cap: None,
            t0: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn objective_cap_for(&self, n_y: usize) -> f64 {
        self.objective_cap.unwrap_or(200.0 * n_y as f64)
    }

    fn validate(&self) -> Result<()> {
        let positive = [self.gap_tol, self.newton_tol, self.t0]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !positive || !(self.barrier_mu > 1.0) || self.max_newton == 0 {
            return Err(QipError::InvalidModel(format!("invalid solver configuration {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolverStatus {
    Optimal,
    Unbounded,
    /// Never produced by [`solve`] itself, which reports infeasibility as an
    /// error; front ends use it to record that outcome.
    Infeasible,
    IterationLimit,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolverStatus::Optimal => "Optimal",
            SolverStatus::Unbounded => "Unbounded",
            SolverStatus::Infeasible => "Infeasible",
            SolverStatus::IterationLimit => "IterationLimit",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    /// The last iterate; the optimum when `status` is `Optimal`.
    pub ssdd: Ssdd,
    pub status: SolverStatus,
    /// `log det X_B`.
    pub objective: f64,
    pub active_set: Vec<usize>,
    pub kkt: KktSummary,
    pub newton_iterations: usize,
    pub t: f64,
}

impl SolverResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolverStatus::Optimal
    }

    pub fn width(&self) -> Result<f64> {
        self.ssdd.cone_width()
    }
}

/// Strictly feasible start `X_C = I/n_x`, `X_A = 0`, `X_B = X_AA = εI`.
pub fn initialize(p: &QipProblem) -> Result<Ssdd> {
    let (ny, nx) = (p.n_y(), p.n_x());
    let mut eps = f64::INFINITY;
    for r in p.rows() {
        let (xx, yy) = (r.input_energy(), r.output_energy());
        let den = yy + xx - r.offset_trace();
        if den > 1e-12 * (xx + yy).max(f64::MIN_POSITIVE) {
            eps = eps.min(0.5 * (xx / nx as f64) / den);
        }
    }
    if !eps.is_finite() {
        eps = 1.0;
    }
    let s = Ssdd {
        xb: DMatrix::identity(ny, ny) * eps,
        xa: DMatrix::zeros(ny, nx),
        xaa: DMatrix::identity(nx, nx) * eps,
        xc: DMatrix::identity(nx, nx) / nx as f64,
    };
    if let Some(i) = p.rows().iter().position(|r| !(r.value(&s) > 0.0)) {
        return Err(QipError::InfeasibleStart(format!(
            "row {i} is not strictly satisfied at the start (ε = {eps:.3e})"
        )));
    }
    Ok(s)
}

/// Rows whose slack is at most `ACTIVE_REL_TOL` times their scale.
pub fn active_set(p: &QipProblem, s: &Ssdd) -> Vec<usize> {
    p.rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value(s) <= ACTIVE_REL_TOL * r.scale(s))
        .map(|(i, _)| i)
        .collect()
}

fn check_inputs_span(p: &QipProblem) -> Result<()> {
    let nx = p.n_x();
    let gram = p
        .rows()
        .iter()
        .fold(DMatrix::zeros(nx, nx), |acc, r| acc + &r.xc);
    let scale = gram.trace();
    if !(scale > 0.0) || linalg::min_eigenvalue(&gram) <= 1e-12 * scale {
        return Err(QipError::InsufficientData(
            "the inputs do not span the input space".into(),
        ));
    }
    Ok(())
}

/// Newton direction for `min φ_t` subject to `a·z = 1`; returns `(dz, λ²)`.
fn newton_direction(eval: &BarrierEval, a: &DVector<f64>, z: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let h = &eval.hessian;
    let g = &eval.gradient;
    let r = 1.0 - a.dot(z);
    let n = h.nrows();
    let d = DVector::from_fn(n, |i, _| 1.0 / h[(i, i)].max(f64::MIN_POSITIVE).sqrt());
    let hs = DMatrix::from_fn(n, n, |i, j| h[(i, j)] * d[i] * d[j]);
    let dz = if let Some(chol) = hs.cholesky() {
        let solve = |v: &DVector<f64>| chol.solve(&v.component_mul(&d)).component_mul(&d);
        let hg = solve(g);
        let ha = solve(a);
        let w = -(r + a.dot(&hg)) / a.dot(&ha);
        -(hg + ha * w)
    } else {
        let mut kkt = DMatrix::zeros(n + 1, n + 1);
        kkt.view_mut((0, 0), (n, n)).copy_from(h);
        for i in 0..n {
            kkt[(i, n)] = a[i];
            kkt[(n, i)] = a[i];
        }
        let mut rhs = DVector::zeros(n + 1);
        rhs.rows_mut(0, n).copy_from(&(-g));
        rhs[n] = r;
        let sol = kkt.lu().solve(&rhs)?;
        sol.rows(0, n).into_owned()
    };
    if dz.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let lambda2 = dz.dot(&(h * &dz)).max(0.0);
    Some((dz, lambda2))
}

pub fn solve(p: &QipProblem, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    check_inputs_span(p)?;
    let start = initialize(p)?;
    let layout = p.layout();
    let barrier = Barrier::new(p);
    let a = layout.trace_xc();
    let nu = p.barrier_parameter();
    let cap = cfg.objective_cap_for(p.n_y());

    let mut z = layout.pack(&start);
    let mut t = cfg.t0;
    let mut iterations = 0usize;

    let finish = |z: &DVector<f64>, status, t: f64, iterations| {
        let ssdd = layout.unpack(z);
        let mut kkt = check_kkt(p, &ssdd);
        kkt.gap_bound = Some(nu / t);
        SolverResult {
            objective: barrier.log_det_xb(z).unwrap_or(f64::NAN),
            active_set: active_set(p, &ssdd),
            ssdd,
            status,
            kkt,
            newton_iterations: iterations,
            t,
        }
    };

    // Exact relations make the supremum infinite; the barrier cannot see this
    // through the rounding residual of the data.
    if p.mode() == Mode::Degenerate && p.relation_residual().is_some_and(|r| r <= EXACT_RELATION_TOL) {
        debug!("data satisfy an exact linear relation; unbounded");
        return Ok(finish(&z, SolverStatus::Unbounded, t, 0));
    }

    loop {
        // Centering.
        loop {
            let eval = barrier.evaluate(&z, t).ok_or_else(|| {
                QipError::InfeasibleStart("iterate left the interior".into())
            })?;
            let Some((dz, lambda2)) = newton_direction(&eval, &a, &z) else {
                debug!("t={t:.3e} Newton system failed; treating iterate as centered");
                break;
            };
            let min_slack = (p.packed_rows() * &z).min();
            debug!(
                "t={t:.3e} obj={:.12e} decrement={lambda2:.3e} min_slack={min_slack:.3e}",
                eval.log_det_xb
            );
            // The decrement cannot resolve changes below the rounding level of φ_t.
            let floor = ROUNDOFF_FACTOR * f64::EPSILON * eval.value.abs();
            if lambda2 / 2.0 <= cfg.newton_tol.max(floor) {
                break;
            }
            if iterations >= cfg.max_newton {
                return Ok(finish(&z, SolverStatus::IterationLimit, t, iterations));
            }
            iterations += 1;
            let slope = eval.gradient.dot(&dz);
            let quadratic = lambda2.sqrt() < QUADRATIC_REGION;
            let mut step = 1.0;
            let accepted = loop {
                let trial = &z + &dz * step;
                if let Some(v) = barrier.value(&trial, t) {
                    if quadratic || v <= eval.value + ARMIJO * step * slope {
                        break Some(trial);
                    }
                }
                step *= BACKTRACK;
                if step < MIN_STEP {
                    break None;
                }
            };
            let Some(next) = accepted else {
                debug!("t={t:.3e} line search stalled; treating iterate as centered");
                break;
            };
            z = next;
            if barrier.log_det_xb(&z).is_some_and(|v| v > cap) {
                return Ok(finish(&z, SolverStatus::Unbounded, t, iterations));
            }
        }
        let objective = barrier.log_det_xb(&z).unwrap_or(f64::NAN);
        if nu / t <= cfg.gap_tol * objective.abs().max(1.0) {
            return Ok(finish(&z, SolverStatus::Optimal, t, iterations));
        }
        t *= cfg.barrier_mu;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::DataPoint;
    use crate::solver::{assemble, NoiseModel};

    fn two_points() -> Vec<DataPoint> {
        vec![DataPoint::real(&[0.5], &[1.0]), DataPoint::real(&[-0.5], &[1.0])]
    }

    #[test]
    fn initialize_single_point() {
        let p = assemble(&[DataPoint::real(&[0.5], &[1.0])], &NoiseModel::None, 0.0).unwrap();
        let s = initialize(&p).unwrap();
        assert!((s.xb[(0, 0)] - 0.4).abs() < 1e-15);
        assert!((p.rows()[0].value(&s) - 0.5).abs() < 1e-15);
        let k = check_kkt(&p, &s);
        assert!(k.min_slack > 0.0 && k.trace_residual == 0.0);
    }

    #[test]
    fn initialize_defaults_to_one_when_no_row_constrains() {
        let big = DMatrix::identity(2, 2) * 10.0;
        let p = assemble(&[DataPoint::real(&[0.1], &[1.0])], &NoiseModel::Shared(big), 1.0).unwrap();
        assert_eq!(initialize(&p).unwrap().xb[(0, 0)], 1.0);
    }

    #[test]
    fn two_point_analytic_optimum() {
        let p = assemble(&two_points(), &NoiseModel::None, 0.0).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Optimal);
        assert!((r.ssdd.xb[(0, 0)] - 4.0).abs() < 1e-4, "{:?}", r.ssdd);
        assert!(r.ssdd.xa[(0, 0)].abs() < 1e-6);
        assert!((r.width().unwrap() - 0.5).abs() < 1e-5);
        assert_eq!(r.active_set, vec![0, 1]);
        assert!(r.kkt.gap_bound.unwrap() <= 1e-8 * r.objective.abs().max(1.0));
        assert!(r.ssdd.certify_specialness(1e-6));
    }

    #[test]
    fn two_point_with_offset() {
        let p = assemble(&two_points(), &NoiseModel::DirectOffset(DMatrix::from_element(1, 1, 0.1)), 0.0)
            .unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Optimal);
        assert!((r.ssdd.xb[(0, 0)] - 20.0 / 3.0).abs() < 1e-3, "{:?}", r.ssdd);
    }

    #[test]
    fn perfect_linear_relationship_is_unbounded() {
        let p = assemble(&[DataPoint::real(&[0.0], &[1.0])], &NoiseModel::None, 0.0).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Unbounded);
    }

    #[test]
    fn exact_complex_relation_is_unbounded() {
        use num_complex::Complex64;
        let a = [0.7, -1.3];
        let data: Vec<DataPoint> = (0..6)
            .map(|k| {
                let w = k as f64 * 0.9;
                let x = [Complex64::from_polar(1.0, w), Complex64::new(0.3 * w, 1.0 - w)];
                let y = a[0] * x[0] + a[1] * x[1];
                DataPoint::new(vec![y].into(), x.to_vec().into())
            })
            .collect();
        let p = assemble(&data, &NoiseModel::None, 0.0).unwrap();
        assert!(p.relation_residual().unwrap() < 1e-12);
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Unbounded);
        assert_eq!(r.newton_iterations, 0);
    }

    #[test]
    fn noisy_point_reaches_the_objective_cap() {
        let p = assemble(&[DataPoint::real(&[0.1], &[1.0])], &NoiseModel::DirectOffset(DMatrix::from_element(1, 1, 1.0)), 0.0)
            .unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Unbounded);
    }

    #[test]
    fn perturbed_optimum_violates_a_row() {
        let p = assemble(&two_points(), &NoiseModel::None, 0.0).unwrap();
        let mut s = solve(&p, &SolverConfig::default()).unwrap().ssdd;
        s.xb[(0, 0)] += 0.1;
        assert!(check_kkt(&p, &s).min_slack < 0.0);
    }
}
