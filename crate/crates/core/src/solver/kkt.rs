//! Feasibility and optimality diagnostics for an SS-DD iterate.

use serde::{Deserialize, Serialize};

use crate::inclusion::Ssdd;
use crate::linalg;

use super::problem::QipProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktSummary {
    pub min_eig_q_prime: f64,
    pub min_eig_xc: f64,
    pub min_slack: f64,
    /// Index of the row attaining `min_slack`.
    pub min_slack_index: usize,
    pub trace_residual: f64,
    /// `ν/t` at termination; `None` for points that did not come from the solver.
    pub gap_bound: Option<f64>,
}

impl KktSummary {
    /// LMIs hold to `-tol` on the smallest eigenvalue and every slack is at least `-tol`.
    pub fn feasible(&self, tol: f64) -> bool {
        self.min_eig_q_prime >= -tol && self.min_eig_xc >= -tol && self.min_slack >= -tol
    }
}

pub fn check_kkt(p: &QipProblem, s: &Ssdd) -> KktSummary {
    let slacks = p.slacks(s);
    let (min_slack_index, min_slack) = slacks
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    KktSummary {
        min_eig_q_prime: linalg::min_eigenvalue(&s.q_prime()),
        min_eig_xc: linalg::min_eigenvalue(&s.xc),
        min_slack,
        min_slack_index,
        trace_residual: (s.xc.trace() - 1.0).abs(),
        gap_bound: None,
    }
}
