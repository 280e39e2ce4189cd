//! File formats: model JSON, measurement CSV/JSON, and deterministic JSON
//! output with floats at 17 significant digits.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QipError, Result};
use crate::inclusion::{Inclusion, Ssdd, DEFAULT_COND_TOL};
use crate::linalg::{row_major, CVector};
use crate::noise::{summarize, NoiseSummary};

pub const FORMAT_VERSION: u32 = 1;

/// Pretty JSON whose floats are written as `{:.16e}`.
struct PreciseFormatter(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let fmt = PreciseFormatter(serde_json::ser::PrettyFormatter::new());
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

fn from_row_major(name: &str, rows: usize, cols: usize, v: &[f64]) -> Result<DMatrix<f64>> {
    if v.len() != rows * cols {
        return Err(QipError::Schema(format!(
            "{name} has {} entries, expected {rows}x{cols}",
            v.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, v))
}

/// On-disk model: `(A, B, C)` row-major, plus the SS-DD blocks when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub n_y: usize,
    pub n_x: usize,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    #[serde(default = "default_true")]
    pub c_invertible: bool,
    #[serde(rename = "X_B", default, skip_serializing_if = "Option::is_none")]
    pub x_b: Option<Vec<f64>>,
    #[serde(rename = "X_A", default, skip_serializing_if = "Option::is_none")]
    pub x_a: Option<Vec<f64>>,
    #[serde(rename = "X_AA", default, skip_serializing_if = "Option::is_none")]
    pub x_aa: Option<Vec<f64>>,
    #[serde(rename = "X_C", default, skip_serializing_if = "Option::is_none")]
    pub x_c: Option<Vec<f64>>,
}

fn default_true() -> bool {
    true
}

impl ModelFile {
    pub fn new(m: &Inclusion, ssdd: Option<&Ssdd>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            n_y: m.n_y(),
            n_x: m.n_x(),
            a: row_major(m.a()),
            b: row_major(m.b()),
            c: row_major(m.c()),
            c_invertible: m.c_is_invertible(),
            x_b: ssdd.map(|s| row_major(&s.xb)),
            x_a: ssdd.map(|s| row_major(&s.xa)),
            x_aa: ssdd.map(|s| row_major(&s.xaa)),
            x_c: ssdd.map(|s| row_major(&s.xc)),
        }
    }

    pub fn inclusion(&self) -> Result<Inclusion> {
        if self.format_version != FORMAT_VERSION {
            return Err(QipError::Schema(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let (ny, nx) = (self.n_y, self.n_x);
        let a = from_row_major("A", ny, nx, &self.a)?;
        let b = from_row_major("B", ny, ny, &self.b)?;
        let c = from_row_major("C", nx, nx, &self.c)?;
        if self.c_invertible {
            Inclusion::new(a, b, c)
        } else {
            Inclusion::with_semidefinite_c(a, b, c, DEFAULT_COND_TOL)
        }
    }

    pub fn ssdd(&self) -> Result<Option<Ssdd>> {
        let (ny, nx) = (self.n_y, self.n_x);
        match (&self.x_b, &self.x_a, &self.x_aa, &self.x_c) {
            (Some(xb), Some(xa), Some(xaa), Some(xc)) => Ok(Some(Ssdd::new(
                from_row_major("X_B", ny, ny, xb)?,
                from_row_major("X_A", ny, nx, xa)?,
                from_row_major("X_AA", nx, nx, xaa)?,
                from_row_major("X_C", nx, nx, xc)?,
            )?)),
            (None, None, None, None) => Ok(None),
            _ => Err(QipError::Schema("SS-DD blocks must be given together".into())),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| QipError::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }
}

/// Repeated measurements of one condition, identified by `id`.
#[derive(Debug, Clone)]
pub struct PointGroup {
    pub id: String,
    pub y: Vec<CVector>,
    pub x: Vec<CVector>,
}

impl PointGroup {
    /// Averaged output with its covariance of the mean (zero for a single
    /// observation) and the averaged input.
    pub fn summarize(&self) -> Result<(NoiseSummary, CVector)> {
        let summary = if self.y.len() == 1 {
            NoiseSummary::exact(&self.y[0])
        } else {
            summarize(&self.y)?
        };
        let n = self.x.len() as f64;
        let x = self.x.iter().fold(CVector::zeros(self.x[0].len()), |acc, v| acc + v) / Complex64::new(n, 0.0);
        Ok((summary, x))
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub n_y: usize,
    pub n_x: usize,
    /// In order of first appearance.
    pub groups: Vec<PointGroup>,
}

impl Dataset {
    pub fn has_repeats(&self) -> bool {
        self.groups.iter().any(|g| g.y.len() > 1)
    }

    fn push(&mut self, index: &mut HashMap<String, usize>, id: String, y: CVector, x: CVector) {
        let k = *index.entry(id.clone()).or_insert_with(|| {
            self.groups.push(PointGroup {
                id,
                y: Vec::new(),
                x: Vec::new(),
            });
            self.groups.len() - 1
        });
        self.groups[k].y.push(y);
        self.groups[k].x.push(x);
    }
}

/// Column names must be `point_id`, then `y<k>_re, y<k>_im` for each output,
/// then `x<k>_re, x<k>_im` for each input.
fn parse_header(header: &csv::StringRecord) -> Result<(usize, usize)> {
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    if cols.first() != Some(&"point_id") {
        return Err(QipError::Schema("first column must be point_id".into()));
    }
    let values = &cols[1..];
    if !values.len().is_multiple_of(2) {
        return Err(QipError::Schema(format!(
            "{} value columns; complex values need re/im pairs",
            values.len()
        )));
    }
    let n_y = values.iter().filter(|c| c.starts_with('y')).count() / 2;
    let n_x = values.len() / 2 - n_y;
    if n_y == 0 || n_x == 0 {
        return Err(QipError::Schema("need at least one y and one x pair".into()));
    }
    for (k, pair) in values.chunks(2).enumerate() {
        let (prefix, idx) = if k < n_y { ("y", k + 1) } else { ("x", k - n_y + 1) };
        let expected = [format!("{prefix}{idx}_re"), format!("{prefix}{idx}_im")];
        if pair[0] != expected[0] || pair[1] != expected[1] {
            return Err(QipError::Schema(format!(
                "expected columns {}, {} but found {}, {}",
                expected[0], expected[1], pair[0], pair[1]
            )));
        }
    }
    Ok((n_y, n_x))
}

pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| QipError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let (n_y, n_x) = parse_header(header)?;
    let mut data = Dataset {
        n_y,
        n_x,
        groups: Vec::new(),
    };
    let mut index = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| QipError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 1 + 2 * (n_y + n_x) {
            return Err(QipError::Schema(format!(
                "line {line}: {} fields, expected {}",
                record.len(),
                1 + 2 * (n_y + n_x)
            )));
        }
        let mut nums = Vec::with_capacity(2 * (n_y + n_x));
        for field in record.iter().skip(1) {
            let v: f64 = field.parse().map_err(|_| QipError::Parse {
                line,
                message: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(QipError::Parse {
                    line,
                    message: format!("non-finite value {field:?}"),
                });
            }
            nums.push(v);
        }
        let complex = |from: usize, n: usize| {
            CVector::from_fn(n, |i, _| Complex64::new(nums[from + 2 * i], nums[from + 2 * i + 1]))
        };
        data.push(&mut index, record[0].to_string(), complex(0, n_y), complex(2 * n_y, n_x));
    }
    if data.groups.is_empty() {
        return Err(QipError::InsufficientData("no data rows".into()));
    }
    Ok(data)
}

#[derive(Debug, Deserialize)]
struct JsonObservation {
    id: String,
    y: Vec<[f64; 2]>,
    x: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
struct JsonData {
    format_version: u32,
    points: Vec<JsonObservation>,
}

/// `{"format_version": 1, "points": [{"id": .., "y": [[re, im], ..], "x": [[re, im], ..]}, ..]}`.
pub fn parse_json_data(text: &str) -> Result<Dataset> {
    let raw: JsonData = serde_json::from_str(text).map_err(|e| QipError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if raw.format_version != FORMAT_VERSION {
        return Err(QipError::Schema(format!("unsupported format_version {}", raw.format_version)));
    }
    let first = raw
        .points
        .first()
        .ok_or_else(|| QipError::InsufficientData("no data points".into()))?;
    let (n_y, n_x) = (first.y.len(), first.x.len());
    if n_y == 0 || n_x == 0 {
        return Err(QipError::Schema("empty y or x".into()));
    }
    let mut data = Dataset {
        n_y,
        n_x,
        groups: Vec::new(),
    };
    let mut index = HashMap::new();
    for (k, p) in raw.points.into_iter().enumerate() {
        if p.y.len() != n_y || p.x.len() != n_x {
            return Err(QipError::Schema(format!("point {k} ({}) has inconsistent dimensions", p.id)));
        }
        let cv = |v: &[[f64; 2]]| CVector::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1])));
        let (y, x) = (cv(&p.y), cv(&p.x));
        data.push(&mut index, p.id, y, x);
    }
    Ok(data)
}

/// Dispatch on extension: `.json` or anything else as CSV.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => parse_json_data(&text),
        _ => parse_csv(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&vec![0.1f64, 1.0 / 3.0, -2.0]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("3.3333333333333331e-1"));
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.0]);
    }

    #[test]
    fn model_round_trip() {
        let m = Inclusion::new(
            DMatrix::from_row_slice(1, 2, &[0.5, -0.25]),
            DMatrix::from_element(1, 1, 0.7),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 2.0]),
        )
        .unwrap();
        let file = ModelFile::new(&m, Some(&m.to_ssdd()));
        let text = to_json_string(&file).unwrap();
        let back: ModelFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.inclusion().unwrap(), m);
        assert_eq!(back.ssdd().unwrap().unwrap(), m.to_ssdd());
    }

    #[test]
    fn csv_groups_repeats() {
        let text = "point_id,y1_re,y1_im,x1_re,x1_im\na,1,0,1,0\nb,0.5,0,2,0\na,-1,0,1,0\n";
        let d = parse_csv(text).unwrap();
        assert_eq!((d.n_y, d.n_x), (1, 1));
        assert_eq!(d.groups.len(), 2);
        assert_eq!(d.groups[0].y.len(), 2);
        let (s, x) = d.groups[0].summarize().unwrap();
        assert_eq!(s.sigma_eta[(0, 0)], 1.0);
        assert_eq!(x[0], Complex64::new(1.0, 0.0));
        assert!(d.has_repeats());
    }

    #[test]
    fn odd_value_columns_are_a_schema_error() {
        let err = parse_csv("point_id,y1_re,y1_im,x1_re\na,1,0,1\n").unwrap_err();
        assert!(matches!(err, QipError::Schema(_)));
    }

    #[test]
    fn bad_number_reports_line() {
        let err = parse_csv("point_id,y1_re,y1_im,x1_re,x1_im\na,1,0,1,0\nb,zz,0,1,0\n").unwrap_err();
        assert!(matches!(err, QipError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn json_data() {
        let text = r#"{"format_version": 1, "points": [
            {"id": "p", "y": [[0.5, 0.0]], "x": [[1.0, 0.0]]},
            {"id": "q", "y": [[-0.5, 0.0]], "x": [[1.0, 0.0]]}]}"#;
        let d = parse_json_data(text).unwrap();
        assert_eq!(d.groups.len(), 2);
        assert!(!d.has_repeats());
    }
}
