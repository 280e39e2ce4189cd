//! Minimal deterministic SVG plotting: linear or log axes, polylines,
//! markers and text. Coordinates are printed with two decimals so identical
//! inputs give byte-identical files.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    fn fwd(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log => v.log10(),
        }
    }
}

/// A data-to-pixel mapping for one plot panel.
#[derive(Debug, Clone, Copy)]
pub struct Axes {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub x_scale: Scale,
    pub y_scale: Scale,
    /// `(left, top, width, height)` in pixels.
    pub frame: (f64, f64, f64, f64),
}

impl Axes {
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (l, t, w, h) = self.frame;
        let fx = |v: f64| {
            let (a, b) = (self.x_scale.fwd(self.x_range.0), self.x_scale.fwd(self.x_range.1));
            l + (self.x_scale.fwd(v) - a) / (b - a) * w
        };
        let fy = |v: f64| {
            let (a, b) = (self.y_scale.fwd(self.y_range.0), self.y_scale.fwd(self.y_range.1));
            t + h - (self.y_scale.fwd(v) - a) / (b - a) * h
        };
        (fx(x), fy(y))
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        let ok = |v: f64, (a, b): (f64, f64), s: Scale| v.is_finite() && v >= a.min(b) && v <= a.max(b) && (s == Scale::Linear || v > 0.0);
        ok(x, self.x_range, self.x_scale) && ok(y, self.y_range, self.y_scale)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Stroke<'a> {
    pub color: &'a str,
    pub width: f64,
    pub dash: Option<&'a str>,
}

impl<'a> Stroke<'a> {
    pub fn solid(color: &'a str, width: f64) -> Self {
        Self { color, width, dash: None }
    }

    pub fn dashed(color: &'a str, width: f64, dash: &'a str) -> Self {
        Self {
            color,
            width,
            dash: Some(dash),
        }
    }

    fn attrs(&self) -> String {
        let mut s = format!(r#"fill="none" stroke="{}" stroke-width="{:.2}""#, self.color, self.width);
        if let Some(d) = self.dash {
            let _ = write!(s, r#" stroke-dasharray="{d}""#);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        let mut body = String::new();
        let _ = writeln!(body, r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#);
        Self { width, height, body }
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        let escaped = content.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="{size:.1}" text-anchor="{anchor}">{escaped}</text>"#
        );
    }

    /// A polyline through the points that fall inside the axes; gaps split it.
    pub fn polyline(&mut self, axes: &Axes, points: &[(f64, f64)], stroke: Stroke) {
        let mut run: Vec<(f64, f64)> = Vec::new();
        let flush = |run: &mut Vec<(f64, f64)>, body: &mut String| {
            if run.len() >= 2 {
                let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(body, r#"<polyline points="{}" {}/>"#, pts.join(" "), stroke.attrs());
            }
            run.clear();
        };
        for &(x, y) in points {
            if axes.inside(x, y) {
                run.push(axes.map(x, y));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }

    pub fn marker(&mut self, axes: &Axes, x: f64, y: f64, radius: f64, fill: &str) {
        if axes.inside(x, y) {
            let (px, py) = axes.map(x, y);
            let _ = writeln!(
                self.body,
                r#"<circle cx="{px:.2}" cy="{py:.2}" r="{radius:.2}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#
            );
        }
    }

    /// Frame, ticks and labels.
    pub fn axes(&mut self, axes: &Axes, x_label: &str, y_label: &str, title: &str) {
        let (l, t, w, h) = axes.frame;
        let _ = writeln!(
            self.body,
            r#"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        for v in ticks(axes.x_range, axes.x_scale) {
            let (px, _) = axes.map(v, axes.y_range.0);
            let _ = writeln!(
                self.body,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="lightgray" stroke-width="0.5"/>"#,
                t,
                t + h
            );
            self.text(px, t + h + 14.0, 10.0, "middle", &tick_label(v));
        }
        for v in ticks(axes.y_range, axes.y_scale) {
            let (_, py) = axes.map(axes.x_range.0, v);
            let _ = writeln!(
                self.body,
                r#"<line x1="{l:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="lightgray" stroke-width="0.5"/>"#,
                l + w
            );
            self.text(l - 4.0, py + 3.5, 10.0, "end", &tick_label(v));
        }
        self.text(l + w / 2.0, t + h + 32.0, 12.0, "middle", x_label);
        let (cx, cy) = (l - 44.0, t + h / 2.0);
        let _ = writeln!(
            self.body,
            r#"<text x="{cx:.2}" y="{cy:.2}" font-family="sans-serif" font-size="12.0" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{y_label}</text>"#
        );
        self.text(l + w / 2.0, t - 8.0, 13.0, "middle", title);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Decades for log axes; 1, 2 or 5 times a power of ten for linear axes.
pub fn ticks(range: (f64, f64), scale: Scale) -> Vec<f64> {
    let (lo, hi) = (range.0.min(range.1), range.0.max(range.1));
    match scale {
        Scale::Log => {
            let (a, b) = (lo.log10().ceil() as i32, hi.log10().floor() as i32);
            (a..=b).map(|e| 10f64.powi(e)).collect()
        }
        Scale::Linear => {
            let raw = (hi - lo) / 6.0;
            if !(raw > 0.0) {
                return vec![lo];
            }
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| *s >= raw)
                .unwrap_or(10.0 * mag);
            let first = (lo / step).ceil() as i64;
            let last = (hi / step).floor() as i64;
            (first..=last).map(|k| k as f64 * step).collect()
        }
    }
}
