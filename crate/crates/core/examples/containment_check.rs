//! Necessary-condition and sampling tests for containment between two models.

use quadric_inclusion::containment::{containment_falsify, necessary_product};
use quadric_inclusion::inclusion::scalar;
use quadric_inclusion::Inclusion;

fn main() -> quadric_inclusion::Result<()> {
    let outer = Inclusion::new(scalar(0.5), scalar(0.4), scalar(1.0))?;
    let candidates = [
        ("half-size", Inclusion::new(scalar(0.5), scalar(0.2), scalar(1.0))?),
        ("shifted", Inclusion::new(scalar(0.8), scalar(0.2), scalar(1.0))?),
        ("wider", Inclusion::new(scalar(0.5), scalar(0.6), scalar(1.0))?),
    ];
    for (name, inner) in &candidates {
        let product = necessary_product(inner, &outer)?;
        let falsified = containment_falsify(inner, &outer, 500, 1)?;
        println!(
            "{name:>9}: widths {:.3} vs {:.3}, σ(B̃)σ(C̃) = {product:.3}, counterexample {}",
            inner.cone_width(),
            outer.cone_width(),
            falsified.map_or("none".into(), |d| format!("Δ = {}", d[(0, 0)]))
        );
    }
    Ok(())
}
