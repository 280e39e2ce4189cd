//! Repeated noisy measurements of a known scalar inclusion, fitted with and
//! without the chi-square noise relaxation.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use quadric_inclusion::noise::{chi2_threshold, summarize};
use quadric_inclusion::solver::{assemble, solve, NoiseModel, SolverConfig};
use quadric_inclusion::DataPoint;

fn main() -> quadric_inclusion::Result<()> {
    // True model y = (0.8 + 0.3Δ)x.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut points = Vec::new();
    let mut summaries = Vec::new();
    for k in 0..12 {
        let x = Complex64::from_polar(1.0 + 0.1 * k as f64, 0.5 * k as f64);
        let delta = Complex64::from_polar(rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU);
        let y = (0.8 + 0.3 * delta) * x;
        let repeats: Vec<_> = (0..8)
            .map(|_| {
                let n: f64 = rng.sample(StandardNormal);
                let m: f64 = rng.sample(StandardNormal);
                DVector::from_element(1, y + 0.05 * Complex64::new(n, m))
            })
            .collect();
        let s = summarize(&repeats)?;
        points.push(DataPoint::new(s.mean_complex(), DVector::from_element(1, x)));
        summaries.push(s);
    }
    let cfg = SolverConfig::default();
    let exact = solve(&assemble(&points, &NoiseModel::None, 0.0)?, &cfg)?;
    let alpha = chi2_threshold(1, 0.01);
    let relaxed = solve(&assemble(&points, &NoiseModel::from_summaries(&summaries), alpha)?, &cfg)?;
    for (label, r) in [("degenerate", &exact), ("relaxed", &relaxed)] {
        println!(
            "{label:>10}: status {}, width {:.4} (true 0.3), nominal {:.4}, active {:?}",
            r.status,
            r.width()?,
            r.ssdd.xa[(0, 0)] / r.ssdd.xb[(0, 0)],
            r.active_set
        );
    }
    println!("α = {alpha:.4}");
    Ok(())
}
