//! Randomized properties of the determinant-maximization solver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use quadric_inclusion::linalg::CVector;
use quadric_inclusion::solver::{assemble, initialize, solve, Barrier, NoiseModel, SolverConfig, SolverResult, SolverStatus};
use quadric_inclusion::DataPoint;

const NY: usize = 2;
const NX: usize = 2;

fn point() -> impl Strategy<Value = DataPoint> {
    prop::collection::vec(-2.0f64..2.0, 2 * (NY + NX)).prop_map(|v| {
        let c = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
        DataPoint::new(CVector::from_fn(NY, |i, _| c(i)), CVector::from_fn(NX, |i, _| c(NY + i)))
    })
}

fn data(min: usize, max: usize) -> impl Strategy<Value = Vec<DataPoint>> {
    prop::collection::vec(point(), min..=max)
}

fn fit(data: &[DataPoint], noise: &NoiseModel) -> SolverResult {
    solve(&assemble(data, noise, 0.0).unwrap(), &SolverConfig::default()).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    /// More data can only widen the fitted set.
    #[test]
    fn width_is_monotone_in_the_data(d in data(4, 9), k in 3usize..8) {
        let k = k.min(d.len() - 1);
        let (sub, full) = (fit(&d[..k], &NoiseModel::None), fit(&d, &NoiseModel::None));
        prop_assume!(sub.is_optimal() && full.is_optimal());
        let (ws, wf) = (sub.width().unwrap(), full.width().unwrap());
        prop_assert!(ws <= wf * (1.0 + 1e-6), "{ws} > {wf}");
    }

    /// A nonnegative offset loosens every row, so the width cannot grow.
    #[test]
    fn relaxation_never_widens(d in data(4, 8), c in 0.0f64..0.5) {
        let exact = fit(&d, &NoiseModel::None);
        prop_assume!(exact.is_optimal());
        let relaxed = fit(&d, &NoiseModel::DirectOffset(DMatrix::identity(NY, NY) * c));
        prop_assert_eq!(relaxed.status, SolverStatus::Optimal);
        let (we, wr) = (exact.width().unwrap(), relaxed.width().unwrap());
        prop_assert!(wr <= we * (1.0 + 1e-6), "{wr} > {we}");
    }

    #[test]
    fn optimum_is_feasible_special_and_tight(d in data(4, 8)) {
        let r = fit(&d, &NoiseModel::None);
        prop_assume!(r.is_optimal());
        prop_assert!(r.kkt.feasible(1e-8), "{:?}", r.kkt);
        prop_assert!(r.kkt.gap_bound.unwrap() <= 1e-8 * r.objective.abs().max(1.0));
        prop_assert!(r.ssdd.certify_specialness(1e-6));
        prop_assert!(!r.active_set.is_empty());
    }

    /// Every input point lies in the identified inclusion.
    #[test]
    fn fitted_inclusion_covers_the_data(d in data(4, 8)) {
        let r = fit(&d, &NoiseModel::None);
        prop_assume!(r.is_optimal());
        let m = r.ssdd.to_inclusion().unwrap();
        let q = r.ssdd.quadric();
        for p in &d {
            prop_assert!(q.value(p) >= -1e-7 * (p.stacked().norm_squared() * r.ssdd.xb.norm()).max(1.0));
            let _ = m.witness_delta(p).unwrap();
        }
    }
}

#[test]
fn barrier_hessian_matches_finite_differences() {
    let pts: Vec<DataPoint> = (0..5)
        .map(|k| {
            let f = k as f64;
            DataPoint::new(
                CVector::from_vec(vec![Complex64::new(f.sin(), 0.3 * f), Complex64::new(1.0 - 0.2 * f, f.cos())]),
                CVector::from_vec(vec![Complex64::new(1.0, 0.1 * f), Complex64::new(0.5 * f, -0.4)]),
            )
        })
        .collect();
    let p = assemble(&pts, &NoiseModel::Shared(DMatrix::identity(4, 4) * 0.02), 1.5).unwrap();
    let barrier = Barrier::new(&p);
    let z = p.layout().pack(&initialize(&p).unwrap());
    let t = 3.0;
    let eval = barrier.evaluate(&z, t).unwrap();
    let n = z.len();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let h = 1e-6 * z[k].abs().max(1e-3);
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[k] += h;
        zm[k] -= h;
        let col: DVector<f64> = (barrier.gradient(&zp, t).unwrap() - barrier.gradient(&zm, t).unwrap()) / (2.0 * h);
        worst = worst.max((col - eval.hessian.column(k)).norm() / eval.hessian.norm());
    }
    assert!(worst <= 1e-5, "relative Hessian error {worst:.2e}");
    let sym = (&eval.hessian - eval.hessian.transpose()).norm() / eval.hessian.norm();
    assert!(sym <= 1e-12);
}
