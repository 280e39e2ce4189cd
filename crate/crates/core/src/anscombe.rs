//! Scalar inclusion fits to Anscombe's quartet with a fixed relaxation on
//! the `X_B` term.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::inclusion::DataPoint;
use crate::solver::{assemble, solve, NoiseModel, SolverConfig, SolverResult, SolverStatus};
use crate::svg::{Axes, Scale, Stroke, Svg};

/// Shift applied to every `y` so the common regression line passes near the origin.
pub const Y_SHIFT: f64 = -3.0;

const X_123: [f64; 11] = [10.0, 8.0, 13.0, 9.0, 11.0, 14.0, 6.0, 4.0, 12.0, 7.0, 5.0];
const X_4: [f64; 11] = [8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 8.0, 19.0, 8.0, 8.0, 8.0];
const Y: [[f64; 11]; 4] = [
    [8.04, 6.95, 7.58, 8.81, 8.33, 9.96, 7.24, 4.26, 10.84, 4.82, 5.68],
    [9.14, 8.14, 8.74, 8.77, 9.26, 8.10, 6.13, 3.10, 9.13, 7.26, 4.74],
    [7.46, 6.77, 12.74, 7.11, 7.81, 8.84, 6.08, 5.39, 8.15, 6.42, 5.73],
    [6.58, 5.76, 7.71, 8.84, 8.47, 7.04, 5.25, 12.50, 5.56, 7.91, 6.89],
];

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// The four datasets as `(x, y)` with the shift applied to `y`.
pub fn quartet() -> [(Vec<f64>, Vec<f64>); 4] {
    std::array::from_fn(|k| {
        let x = if k == 3 { X_4.to_vec() } else { X_123.to_vec() };
        let y = Y[k].iter().map(|v| v + Y_SHIFT).collect();
        (x, y)
    })
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone)]
pub struct QuartetFit {
    pub name: &'static str,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub offset: f64,
    pub result: SolverResult,
    pub ls: (f64, f64),
}

impl QuartetFit {
    /// Nominal slope `A = X_A / X_B`.
    pub fn slope(&self) -> f64 {
        let s = &self.result.ssdd;
        s.xa[(0, 0)] / s.xb[(0, 0)]
    }

    /// Asymptotic half-opening `√(X_C / X_B)`.
    pub fn spread(&self) -> f64 {
        let s = &self.result.ssdd;
        (s.xc[(0, 0)] / s.xb[(0, 0)]).max(0.0).sqrt()
    }

    /// Hyperbolic bounds `Ax ± √(r²x² + offset)`.
    pub fn bounds(&self, x: f64) -> (f64, f64) {
        let (a, r) = (self.slope(), self.spread());
        let h = (r * r * x * x + self.offset).sqrt();
        (a * x - h, a * x + h)
    }

    pub fn summary(&self) -> QuartetSummary {
        QuartetSummary {
            name: self.name.to_string(),
            status: self.result.status,
            active: self.result.active_set.clone(),
            slope: self.slope(),
            spread: self.spread(),
            x_b: self.result.ssdd.xb[(0, 0)],
            width: self.result.width().ok(),
            ls_slope: self.ls.0,
            ls_intercept: self.ls.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuartetSummary {
    pub name: String,
    pub status: SolverStatus,
    pub active: Vec<usize>,
    pub slope: f64,
    pub spread: f64,
    pub x_b: f64,
    pub width: Option<f64>,
    pub ls_slope: f64,
    pub ls_intercept: f64,
}

/// Fit every dataset with the relaxation `offset·X_B` added to each inequality.
pub fn fit_quartet(offset: f64, cfg: &SolverConfig) -> Result<Vec<QuartetFit>> {
    quartet()
        .into_iter()
        .zip(NAMES)
        .map(|((x, y), name)| {
            let data: Vec<DataPoint> = x.iter().zip(&y).map(|(&xi, &yi)| DataPoint::real(&[yi], &[xi])).collect();
            let noise = NoiseModel::DirectOffset(DMatrix::from_element(1, 1, offset));
            let result = solve(&assemble(&data, &noise, 0.0)?, cfg)?;
            let ls = least_squares_line(&x, &y);
            Ok(QuartetFit {
                name,
                x,
                y,
                offset,
                result,
                ls,
            })
        })
        .collect()
}

pub fn render(fit: &QuartetFit) -> String {
    let axes = Axes {
        x_range: (0.0, 20.0),
        y_range: (-4.0, 14.0),
        x_scale: Scale::Linear,
        y_scale: Scale::Linear,
        frame: (60.0, 40.0, 420.0, 320.0),
    };
    let mut svg = Svg::new(520.0, 410.0);
    svg.axes(&axes, "x", "y − 3", &format!("Anscombe ({})", fit.name));
    let xs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
    let (a, r) = (fit.slope(), fit.spread());
    let curve = |f: &dyn Fn(f64) -> f64| xs.iter().map(|&x| (x, f(x))).collect::<Vec<_>>();
    svg.polyline(&axes, &curve(&|x| a * x), Stroke::dashed("steelblue", 1.5, "6 4"));
    for s in [-1.0, 1.0] {
        svg.polyline(&axes, &curve(&|x| (a + s * r) * x), Stroke::dashed("gray", 1.0, "2 3"));
    }
    svg.polyline(&axes, &curve(&|x| fit.bounds(x).0), Stroke::solid("steelblue", 1.5));
    svg.polyline(&axes, &curve(&|x| fit.bounds(x).1), Stroke::solid("steelblue", 1.5));
    for (i, (&x, &y)) in fit.x.iter().zip(&fit.y).enumerate() {
        if fit.result.active_set.contains(&i) {
            svg.marker(&axes, x, y, 6.0, "orangered");
        } else {
            svg.marker(&axes, x, y, 3.0, "black");
        }
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ls_lines_match_the_known_statistics() {
        for (x, y) in quartet() {
            let (slope, intercept) = least_squares_line(&x, &y);
            assert!((slope - 0.5).abs() < 1e-3);
            assert!(intercept.abs() < 3e-3);
        }
    }
}
