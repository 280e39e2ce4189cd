//! Inclusion fits to the shifted Anscombe quartet. Pass a directory to also
//! write the SVG plots.

use quadric_inclusion::anscombe::{fit_quartet, render};
use quadric_inclusion::solver::SolverConfig;

fn main() -> quadric_inclusion::Result<()> {
    let out = std::env::args().nth(1);
    for fit in fit_quartet(2.0, &SolverConfig::default())? {
        let s = fit.summary();
        println!(
            "({}) active {:?}  slope {:.4} ± {:.4}  | LS {:.5}x + {:.5}",
            s.name, s.active, s.slope, s.spread, s.ls_slope, s.ls_intercept
        );
        if let Some(dir) = &out {
            std::fs::write(format!("{dir}/anscombe_{}.svg", s.name), render(&fit))?;
        }
    }
    Ok(())
}
