//! Identification of norm-bounded linear inclusions
//! `y ∈ {(A + BΔC)x : ‖Δ‖ ≤ 1}` from complex input–output data by
//! determinant maximization under linear matrix inequalities.

// `!(x > 0.0)` is the idiom for rejecting NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anscombe;
pub mod app;
pub mod chi2;
pub mod containment;
pub mod error;
pub mod freq;
pub mod inclusion;
pub mod io;
pub mod linalg;
pub mod noise;
pub mod solver;
pub mod svg;

pub use error::{QipError, Result};
pub use inclusion::{DataPoint, Inclusion, QuadricForm, Ssdd};
