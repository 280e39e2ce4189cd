//! The `fit` command on a small CSV with repeated points: writes a model and a
//! report into a temporary directory and prints them.

use quadric_inclusion::app::{cmd_fit, FitOptions};

const DATA: &str = "\
point_id,y1_re,y1_im,x1_re,x1_im
p0,0.52,0.01,1.0,0.0
p0,0.47,-0.02,1.0,0.0
p0,0.50,0.00,1.0,0.0
p1,-0.30,0.41,0.0,1.0
p1,-0.28,0.38,0.0,1.0
p1,-0.33,0.40,0.0,1.0
p2,0.95,0.05,2.0,0.0
p2,1.02,-0.04,2.0,0.0
p2,0.99,0.01,2.0,0.0
";

fn main() -> quadric_inclusion::Result<()> {
    let dir = tempfile::tempdir()?;
    let data = dir.path().join("points.csv");
    std::fs::write(&data, DATA)?;
    let outcome = cmd_fit(&data, &FitOptions::new(dir.path()))?;
    println!("exit code {}", outcome.exit_code);
    println!("{}", std::fs::read_to_string(dir.path().join("report.json"))?);
    println!("{}", std::fs::read_to_string(dir.path().join("model.json"))?);
    Ok(())
}
