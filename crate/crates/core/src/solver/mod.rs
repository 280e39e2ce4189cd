//! Determinant maximization over SS-DD variables.

mod barrier;
mod ipm;
mod kkt;
mod layout;
mod problem;

pub use barrier::{Barrier, BarrierEval};
pub use ipm::{active_set, initialize, solve, SolverConfig, SolverResult, SolverStatus, ACTIVE_REL_TOL};
pub use kkt::{check_kkt, KktSummary};
pub use layout::{Block, Coord, Layout};
pub use problem::{assemble, Mode, NoiseModel, QipProblem, RowFunctional};
