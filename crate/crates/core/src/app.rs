//! Command implementations behind the `qip` binary. Each command writes its
//! artifacts and returns a serializable report plus the process exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::anscombe;
use crate::containment::{containment_falsify, necessary_product, CONTAINMENT_TOL};
use crate::error::{QipError, Result};
use crate::freq::{run_scenario, EnvelopePoint, FreqOutcome, ScenarioConfig};
use crate::inclusion::{DataPoint, DEFAULT_SPECIALNESS_TOL};
use crate::io::{load_dataset, write_json, ModelFile, FORMAT_VERSION};
use crate::linalg::{self, CMatrix};
use crate::noise::{chi2_threshold, DEFAULT_DELTA};
use crate::solver::{assemble, solve, KktSummary, NoiseModel, SolverConfig, SolverStatus};
use crate::svg::{Axes, Scale, Stroke, Svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_UNBOUNDED: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_ITERATION_LIMIT: i32 = 4;
/// `EX_DATAERR` from sysexits.
pub const EXIT_DATA: i32 = 64;
/// `EX_IOERR` from sysexits.
pub const EXIT_IO: i32 = 74;

pub fn status_exit_code(status: SolverStatus) -> i32 {
    match status {
        SolverStatus::Optimal => EXIT_OK,
        SolverStatus::Unbounded => EXIT_UNBOUNDED,
        SolverStatus::Infeasible => EXIT_INFEASIBLE,
        SolverStatus::IterationLimit => EXIT_ITERATION_LIMIT,
    }
}

pub fn error_exit_code(err: &QipError) -> i32 {
    match err {
        QipError::Parse { .. } | QipError::Schema(_) | QipError::Dimension(_) | QipError::Json(_) => EXIT_DATA,
        QipError::Io(_) => EXIT_IO,
        QipError::InfeasiblePoint { .. } | QipError::InfeasibleStart(_) => EXIT_INFEASIBLE,
        _ => EXIT_RUNTIME,
    }
}

/// A command's report together with the exit code it implies.
#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub report: T,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    Degenerate,
    Noisy,
}

impl FromStr for FitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "degenerate" => Ok(FitMode::Degenerate),
            "noisy" => Ok(FitMode::Noisy),
            other => Err(format!("unknown mode '{other}', expected degenerate or noisy")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub delta: f64,
    /// Replaces `chi2_threshold(n_y, delta)` when set.
    pub alpha: Option<f64>,
    /// `None` picks noisy when any point has repeats.
    pub mode: Option<FitMode>,
    pub out_dir: PathBuf,
    pub solver: SolverConfig,
}

impl FitOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            delta: DEFAULT_DELTA,
            alpha: None,
            mode: None,
            out_dir: out_dir.into(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSlack {
    pub id: String,
    pub slack: f64,
}

/// Summary of one `fit` run. `width` is present iff `status` is Optimal.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub format_version: u32,
    pub model_file: Option<String>,
    pub status: SolverStatus,
    pub width: Option<f64>,
    pub objective: Option<f64>,
    pub active_point_ids: Vec<String>,
    pub newton_iterations: usize,
    pub slacks: Vec<PointSlack>,
    pub alpha: f64,
    pub mode: FitMode,
    pub kkt: Option<KktSummary>,
    pub message: Option<String>,
}

pub const MODEL_FILE: &str = "model.json";
pub const FIT_REPORT_FILE: &str = "report.json";

/// Group repeats, summarize noise, solve, and write `model.json` (when
/// optimal) and `report.json` into `opts.out_dir`.
pub fn cmd_fit(data_path: &Path, opts: &FitOptions) -> Result<Outcome<FitReport>> {
    let dataset = load_dataset(data_path)?;
    let mode = opts.mode.unwrap_or(if dataset.has_repeats() {
        FitMode::Noisy
    } else {
        FitMode::Degenerate
    });
    let mut points = Vec::with_capacity(dataset.groups.len());
    let mut sigmas = Vec::with_capacity(dataset.groups.len());
    for g in &dataset.groups {
        let (summary, x) = g.summarize()?;
        points.push(DataPoint::new(summary.mean_complex(), x));
        sigmas.push(summary.sigma_eta);
    }
    let (noise, alpha) = match mode {
        FitMode::Degenerate => (NoiseModel::None, 0.0),
        FitMode::Noisy => (
            NoiseModel::PerPoint(sigmas),
            opts.alpha.unwrap_or_else(|| chi2_threshold(dataset.n_y, opts.delta)),
        ),
    };
    let ids: Vec<String> = dataset.groups.iter().map(|g| g.id.clone()).collect();
    std::fs::create_dir_all(&opts.out_dir)?;
    let report_path = opts.out_dir.join(FIT_REPORT_FILE);

    let infeasible = |e: QipError| -> Result<Outcome<FitReport>> {
        let report = FitReport {
            format_version: FORMAT_VERSION,
            model_file: None,
            status: SolverStatus::Infeasible,
            width: None,
            objective: None,
            active_point_ids: Vec::new(),
            newton_iterations: 0,
            slacks: Vec::new(),
            alpha,
            mode,
            kkt: None,
            message: Some(e.to_string()),
        };
        write_json(&report, &report_path)?;
        Ok(Outcome {
            report,
            exit_code: EXIT_INFEASIBLE,
        })
    };
    let problem = match assemble(&points, &noise, alpha) {
        Ok(p) => p,
        Err(e @ QipError::InfeasiblePoint { .. }) => return infeasible(e),
        Err(e) => return Err(e),
    };
    let result = match solve(&problem, &opts.solver) {
        Ok(r) => r,
        Err(e @ (QipError::InfeasiblePoint { .. } | QipError::InfeasibleStart(_))) => return infeasible(e),
        Err(e) => return Err(e),
    };

    let optimal = result.is_optimal();
    let model_file = if optimal {
        let s = &result.ssdd;
        let inclusion = if linalg::min_eigenvalue(&s.xc) > 0.0 {
            s.to_inclusion()?
        } else {
            s.to_inclusion_semidefinite(DEFAULT_SPECIALNESS_TOL)?
        };
        ModelFile::new(&inclusion, Some(s)).save(&opts.out_dir.join(MODEL_FILE))?;
        Some(MODEL_FILE.to_string())
    } else {
        None
    };
    let slacks = problem.slacks(&result.ssdd);
    let report = FitReport {
        format_version: FORMAT_VERSION,
        model_file,
        status: result.status,
        width: if optimal { Some(result.width()?) } else { None },
        objective: result.objective.is_finite().then_some(result.objective),
        active_point_ids: result.active_set.iter().map(|&i| ids[i].clone()).collect(),
        newton_iterations: result.newton_iterations,
        slacks: ids
            .iter()
            .zip(slacks.iter())
            .map(|(id, &slack)| PointSlack { id: id.clone(), slack })
            .collect(),
        alpha,
        mode,
        kkt: Some(result.kkt.clone()),
        message: None,
    };
    write_json(&report, &report_path)?;
    Ok(Outcome {
        exit_code: status_exit_code(result.status),
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AnscombeReport {
    pub format_version: u32,
    pub offset: f64,
    pub datasets: Vec<AnscombeEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnscombeEntry {
    #[serde(flatten)]
    pub fit: anscombe::QuartetSummary,
    pub active_count: usize,
    pub svg: String,
}

/// Fit the four shifted Anscombe datasets with a fixed offset and write one
/// SVG per dataset plus `anscombe_report.json`.
pub fn cmd_demo_anscombe(offset: f64, out_dir: &Path, solver: &SolverConfig) -> Result<Outcome<AnscombeReport>> {
    std::fs::create_dir_all(out_dir)?;
    let fits = anscombe::fit_quartet(offset, solver)?;
    let mut datasets = Vec::new();
    let mut exit_code = EXIT_OK;
    for f in &fits {
        let svg = format!("anscombe_{}.svg", f.name);
        std::fs::write(out_dir.join(&svg), anscombe::render(f))?;
        if exit_code == EXIT_OK {
            exit_code = status_exit_code(f.result.status);
        }
        datasets.push(AnscombeEntry {
            fit: f.summary(),
            active_count: f.result.active_set.len(),
            svg,
        });
    }
    let report = AnscombeReport {
        format_version: FORMAT_VERSION,
        offset,
        datasets,
    };
    write_json(&report, &out_dir.join("anscombe_report.json"))?;
    Ok(Outcome { report, exit_code })
}

#[derive(Debug, Clone, Default)]
pub struct FreqOptions {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActiveSample {
    pub index: usize,
    pub omega: f64,
    pub condition: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SsddJson {
    pub n_y: usize,
    pub n_x: usize,
    #[serde(rename = "X_B")]
    pub x_b: Vec<f64>,
    #[serde(rename = "X_A")]
    pub x_a: Vec<f64>,
    #[serde(rename = "X_AA")]
    pub x_aa: Vec<f64>,
    #[serde(rename = "X_C")]
    pub x_c: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeRow {
    pub omega: f64,
    pub qip: Option<EnvelopePoint>,
    pub ls: Option<EnvelopePoint>,
    pub true_magnitude: Vec<f64>,
}

/// Deterministic summary of the frequency experiment (no timings).
#[derive(Debug, Clone, Serialize)]
pub struct FreqReport {
    pub format_version: u32,
    pub config: ScenarioConfig,
    pub status: SolverStatus,
    pub newton_iterations: usize,
    pub alpha: f64,
    pub qip_width: Option<f64>,
    pub ls_width: Option<f64>,
    pub gamma_min: Option<f64>,
    pub specialness_certified: bool,
    pub min_slack: f64,
    pub containment_fraction: Option<f64>,
    pub active_samples: Vec<ActiveSample>,
    pub ssdd: Option<SsddJson>,
    pub envelope: Vec<EnvelopeRow>,
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg: ScenarioConfig = serde_json::from_str(&text).map_err(|e| QipError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    cfg.plant.validate()?;
    Ok(cfg)
}

pub fn freq_report(out: &FreqOutcome) -> FreqReport {
    let res = &out.qip.result;
    let optimal = res.is_optimal();
    let envelope = out
        .grid
        .iter()
        .enumerate()
        .map(|(i, &omega)| EnvelopeRow {
            omega,
            qip: out.qip_envelope.as_ref().map(|e| e[i]),
            ls: out.baseline.as_ref().map(|b| b.envelope[i]),
            true_magnitude: out.true_response.iter().map(|g| g[i].norm()).collect(),
        })
        .collect();
    let s = &res.ssdd;
    FreqReport {
        format_version: FORMAT_VERSION,
        config: out.config.clone(),
        status: res.status,
        newton_iterations: res.newton_iterations,
        alpha: out.qip.alpha,
        qip_width: if optimal { out.qip.width().ok() } else { None },
        ls_width: out.baseline.as_ref().map(|b| b.width),
        gamma_min: out.baseline.as_ref().map(|b| b.gamma_min),
        specialness_certified: optimal && s.certify_specialness(DEFAULT_SPECIALNESS_TOL),
        min_slack: res.kkt.min_slack,
        containment_fraction: out.containment_fraction(),
        active_samples: res
            .active_set
            .iter()
            .map(|&i| ActiveSample {
                index: i,
                omega: out.samples[i].omega,
                condition: out.samples[i].condition,
            })
            .collect(),
        ssdd: optimal.then(|| SsddJson {
            n_y: s.n_y(),
            n_x: s.n_x(),
            x_b: linalg::row_major(&s.xb),
            x_a: linalg::row_major(&s.xa),
            x_aa: linalg::row_major(&s.xaa),
            x_c: linalg::row_major(&s.xc),
        }),
        envelope,
    }
}

/// Run the frequency experiment and write `freq_report.json`,
/// `freq_envelope.csv` and `freq_bode.svg`. Artifacts are written for any
/// solver status; missing curves are left empty.
pub fn cmd_demo_freq(opts: &FreqOptions, out_dir: &Path, solver: &SolverConfig) -> Result<Outcome<FreqReport>> {
    let mut cfg = match &opts.config {
        Some(p) => load_scenario(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = opts.seed {
        cfg.plant.seed = seed;
    }
    if let Some(delta) = opts.delta {
        cfg.delta = delta;
    }
    std::fs::create_dir_all(out_dir)?;
    let outcome = run_scenario(&cfg, solver)?;
    let report = freq_report(&outcome);
    write_json(&report, &out_dir.join("freq_report.json"))?;
    std::fs::write(out_dir.join("freq_envelope.csv"), envelope_csv(&outcome)?)?;
    std::fs::write(out_dir.join("freq_bode.svg"), render_bode(&outcome))?;
    Ok(Outcome {
        exit_code: status_exit_code(report.status),
        report,
    })
}

/// One row per grid frequency; phases in degrees, unwrapped per curve.
pub fn envelope_csv(out: &FreqOutcome) -> Result<String> {
    let n_cond = out.true_response.len();
    let mut header: Vec<String> = ["omega", "qip_nominal", "qip_min", "qip_max", "qip_phase_deg", "ls_nominal", "ls_min", "ls_max", "ls_phase_deg"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for c in 0..n_cond {
        header.push(format!("true{c}_mag"));
        header.push(format!("true{c}_phase_deg"));
    }
    let fmt = |v: f64| format!("{v:.16e}");
    let env_cols = |e: Option<&Vec<EnvelopePoint>>, i: usize, phase: &Option<Vec<f64>>| -> Vec<String> {
        match e {
            Some(e) => vec![fmt(e[i].nominal), fmt(e[i].min), fmt(e[i].max), fmt(phase.as_ref().unwrap()[i])],
            None => vec![String::new(); 4],
        }
    };
    let qip_phase = out.qip_envelope.as_ref().map(|e| unwrap_degrees(e.iter().map(|p| p.phase)));
    let ls_phase = out.baseline.as_ref().map(|b| unwrap_degrees(b.envelope.iter().map(|p| p.phase)));
    let true_phase: Vec<Vec<f64>> = out.true_response.iter().map(|g| unwrap_degrees(g.iter().map(|v| v.arg()))).collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| QipError::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(csv_err)?;
    for (i, &omega) in out.grid.iter().enumerate() {
        let mut row = vec![fmt(omega)];
        row.extend(env_cols(out.qip_envelope.as_ref(), i, &qip_phase));
        row.extend(env_cols(out.baseline.as_ref().map(|b| &b.envelope), i, &ls_phase));
        for (response, phase) in out.true_response.iter().zip(&true_phase) {
            row.push(fmt(response[i].norm()));
            row.push(fmt(phase[i]));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| QipError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv of ASCII fields"))
}

/// Radians to degrees with jumps above 180° removed.
pub fn unwrap_degrees(phases: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut shift = 0.0;
    let mut prev: Option<f64> = None;
    for p in phases {
        let d = p.to_degrees();
        if let Some(q) = prev {
            let jump = d + shift - q;
            shift -= 360.0 * (jump / 360.0).round();
        }
        let v = d + shift;
        out.push(v);
        prev = Some(v);
    }
    out
}

const CONDITION_COLORS: [&str; 4] = ["black", "darkgreen", "purple", "saddlebrown"];

pub fn render_bode(out: &FreqOutcome) -> String {
    let (lo, hi) = (out.config.grid.min, out.config.grid.max);
    let mut mags: Vec<f64> = out.true_response.iter().flatten().map(|g| g.norm()).collect();
    for env in out.qip_envelope.iter().chain(out.baseline.as_ref().map(|b| &b.envelope)) {
        mags.extend(env.iter().flat_map(|p| [p.max, p.nominal]));
    }
    let positive = mags.iter().copied().filter(|v| *v > 0.0 && v.is_finite());
    let top = positive.clone().fold(f64::MIN_POSITIVE, f64::max);
    let bottom = positive.fold(top, f64::min).max(top * 1e-6);
    let y_range = (10f64.powf(bottom.log10().floor()), 10f64.powf(top.log10().ceil()));

    let mag_axes = Axes {
        x_range: (lo, hi),
        y_range,
        x_scale: Scale::Log,
        y_scale: Scale::Log,
        frame: (80.0, 40.0, 620.0, 300.0),
    };
    let true_phase: Vec<Vec<f64>> = out.true_response.iter().map(|g| unwrap_degrees(g.iter().map(|v| v.arg()))).collect();
    let qip_phase = out.qip_envelope.as_ref().map(|e| unwrap_degrees(e.iter().map(|p| p.phase)));
    let phases = true_phase.iter().flatten().chain(qip_phase.iter().flatten());
    let (pmin, pmax) = phases.fold((0.0f64, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let phase_axes = Axes {
        x_range: (lo, hi),
        y_range: ((pmin / 90.0).floor() * 90.0, ((pmax / 90.0).ceil() * 90.0).max(90.0)),
        x_scale: Scale::Log,
        y_scale: Scale::Linear,
        frame: (80.0, 400.0, 620.0, 220.0),
    };

    let mut svg = Svg::new(760.0, 680.0);
    svg.axes(&mag_axes, "ω (rad/s)", "|G|", "Inclusion envelope (blue) and scaled LS envelope (red)");
    svg.axes(&phase_axes, "ω (rad/s)", "phase (deg)", "");
    let line = |f: &dyn Fn(usize) -> f64| out.grid.iter().enumerate().map(|(i, &w)| (w, f(i))).collect::<Vec<_>>();
    if let Some(b) = &out.baseline {
        let e = &b.envelope;
        svg.polyline(&mag_axes, &line(&|i| e[i].max), Stroke::solid("firebrick", 1.2));
        svg.polyline(&mag_axes, &line(&|i| e[i].min), Stroke::solid("firebrick", 1.2));
        svg.polyline(&mag_axes, &line(&|i| e[i].nominal), Stroke::dashed("firebrick", 1.0, "6 4"));
    }
    if let Some(e) = &out.qip_envelope {
        svg.polyline(&mag_axes, &line(&|i| e[i].max), Stroke::solid("steelblue", 1.8));
        svg.polyline(&mag_axes, &line(&|i| e[i].min), Stroke::solid("steelblue", 1.8));
        svg.polyline(&mag_axes, &line(&|i| e[i].nominal), Stroke::dashed("steelblue", 1.2, "6 4"));
    }
    if let Some(p) = &qip_phase {
        svg.polyline(&phase_axes, &line(&|i| p[i]), Stroke::dashed("steelblue", 1.2, "6 4"));
    }
    for (c, g) in out.true_response.iter().enumerate() {
        let color = CONDITION_COLORS[c % CONDITION_COLORS.len()];
        svg.polyline(&mag_axes, &line(&|i| g[i].norm()), Stroke::solid(color, 1.0));
        svg.polyline(&phase_axes, &line(&|i| true_phase[c][i]), Stroke::solid(color, 1.0));
    }
    for s in &out.samples {
        let y = s.summary.mean_complex()[0] / s.input_amp;
        svg.marker(&mag_axes, s.omega, y.norm(), 1.6, CONDITION_COLORS[s.condition % CONDITION_COLORS.len()]);
    }
    svg.finish()
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    /// Every test passed; containment is plausible but not proven.
    ContainedConsistent,
    /// At least one test certifies that the outer model misses part of the inner one.
    NotContained,
    Unavailable,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub format_version: u32,
    pub width_inner: f64,
    pub width_outer: f64,
    /// `W_inner ≤ W_outer`, which containment requires.
    pub width_ordering_holds: bool,
    pub necessary_product: Option<f64>,
    pub necessary_holds: Option<bool>,
    pub falsification_samples: usize,
    /// Contraction `Δ` (rows of `[re, im]`) whose image leaves the outer model.
    pub counterexample: Option<Vec<Vec<[f64; 2]>>>,
    pub verdict: CheckVerdict,
    pub reason: Option<String>,
}

impl CheckReport {
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "width inner {:.6e}, outer {:.6e}", self.width_inner, self.width_outer);
        let _ = writeln!(s, "width ordering: {}", if self.width_ordering_holds { "ok" } else { "violated" });
        if let (Some(p), Some(ok)) = (self.necessary_product, self.necessary_holds) {
            let _ = writeln!(s, "necessary condition σ(B̃)σ(C̃) = {p:.6e}: {}", if ok { "ok" } else { "violated" });
        }
        match &self.counterexample {
            Some(_) => {
                let _ = writeln!(s, "falsification: counterexample found");
            }
            None if self.verdict != CheckVerdict::Unavailable => {
                let _ = writeln!(s, "falsification: none in {} samples", self.falsification_samples);
            }
            None => {}
        }
        if let Some(r) = &self.reason {
            let _ = writeln!(s, "{r}");
        }
        let _ = writeln!(s, "verdict: {}", serde_json::to_value(self.verdict).expect("enum").as_str().unwrap_or(""));
        s
    }
}

fn complex_rows(d: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..d.nrows())
        .map(|i| (0..d.ncols()).map(|j| [d[(i, j)].re, d[(i, j)].im]).collect())
        .collect()
}

/// Test whether `outer` can contain `inner`. Exit code 0 when the check ran
/// (whatever the verdict), 1 when it is unavailable.
pub fn cmd_check(inner_path: &Path, outer_path: &Path, opts: &CheckOptions) -> Result<Outcome<CheckReport>> {
    let inner = ModelFile::load(inner_path)?.inclusion()?;
    let outer = ModelFile::load(outer_path)?.inclusion()?;
    if inner.n_y() != outer.n_y() || inner.n_x() != outer.n_x() {
        return Err(QipError::Dimension(format!(
            "inner model is {}x{}, outer is {}x{}",
            inner.n_y(),
            inner.n_x(),
            outer.n_y(),
            outer.n_x()
        )));
    }
    let (wi, wo) = (inner.cone_width(), outer.cone_width());
    let width_ordering_holds = wi <= wo * (1.0 + CONTAINMENT_TOL);
    let mut report = CheckReport {
        format_version: FORMAT_VERSION,
        width_inner: wi,
        width_outer: wo,
        width_ordering_holds,
        necessary_product: None,
        necessary_holds: None,
        falsification_samples: opts.samples,
        counterexample: None,
        verdict: CheckVerdict::Unavailable,
        reason: None,
    };
    if !outer.c_is_invertible() {
        report.reason = Some(
            "check unavailable: the outer model's C is singular, so the inner model cannot be expressed relative to it \
             (the relative frame needs C_outer⁻¹)"
                .into(),
        );
        return Ok(Outcome {
            report,
            exit_code: EXIT_RUNTIME,
        });
    }
    let product = necessary_product(&inner, &outer)?;
    let necessary = product <= 1.0 + CONTAINMENT_TOL;
    let counterexample = containment_falsify(&inner, &outer, opts.samples, opts.seed)?;
    report.necessary_product = Some(product);
    report.necessary_holds = Some(necessary);
    report.verdict = if necessary && width_ordering_holds && counterexample.is_none() {
        CheckVerdict::ContainedConsistent
    } else {
        CheckVerdict::NotContained
    };
    report.counterexample = counterexample.as_ref().map(complex_rows);
    Ok(Outcome {
        report,
        exit_code: EXIT_OK,
    })
}
