//! Membership, witness contractions and cone width for a 2x2 inclusion.

use nalgebra::dmatrix;
use quadric_inclusion::inclusion::cvec;
use quadric_inclusion::{DataPoint, Inclusion};

fn main() -> quadric_inclusion::Result<()> {
    let m = Inclusion::new(
        dmatrix![1.0, 0.2; 0.0, 0.5],
        dmatrix![0.3, 0.0; 0.1, 0.2],
        dmatrix![1.0, 0.0; 0.0, 2.0],
    )?;
    println!("cone width {:.6}", m.cone_width());

    let x = cvec(&[(1.0, 0.0), (0.0, 1.0)]);
    let nominal = m.a().map(|v| v.into()) * &x;
    for (label, dy) in [("nominal", 0.0), ("near", 0.1), ("far", 1.5)] {
        let y = nominal.add_scalar(num_complex::Complex64::new(dy, 0.0));
        let p = DataPoint::new(y, x.clone());
        let delta = m.witness_delta(&p)?;
        let norm = delta.svd(false, false).singular_values[0];
        println!("{label:>8}: member {}, witness ‖Δ‖ = {norm:.4}", m.contains(&p));
    }

    let s = m.to_ssdd();
    println!("SS-DD special: {}, width from SS-DD {:.6}", s.certify_specialness(1e-9), s.cone_width()?);
    Ok(())
}
