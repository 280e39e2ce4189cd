//! Orthonormal basis from the default pole set: Gramian check and responses.

use quadric_inclusion::freq::{default_poles, eval_basis, h2_gram_quadrature, make_basis};

fn main() -> quadric_inclusion::Result<()> {
    let basis = make_basis(&default_poles())?;
    let n = basis.order();
    let gram = h2_gram_quadrature(&basis, 1e-4, 1e4, 20_000);
    let err = (gram - nalgebra::DMatrix::identity(n, n)).amax();
    println!("order {n}, max |⟨φ_i, φ_j⟩ - δ_ij| = {err:.2e}");
    for omega in [0.1, 0.5, 5.0, 50.0] {
        let x = eval_basis(&basis, omega, 1.0.into());
        let mags: Vec<String> = x.iter().map(|v| format!("{:.3}", v.norm())).collect();
        println!("ω = {omega:>5}: |φ| = [{}]", mags.join(", "));
    }
    Ok(())
}
