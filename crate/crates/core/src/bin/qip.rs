use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use quadric_inclusion::app::{
    cmd_check, cmd_demo_anscombe, cmd_demo_freq, cmd_fit, error_exit_code, CheckOptions, FitMode, FitOptions,
    FreqOptions,
};
use quadric_inclusion::io::to_json_string;
use quadric_inclusion::noise::DEFAULT_DELTA;
use quadric_inclusion::solver::SolverConfig;
use quadric_inclusion::QipError;

#[derive(Parser)]
#[command(name = "qip", version, about = "Identify norm-bounded linear inclusions from input-output data")]
struct Cli {
    /// Debug logging (QIP_LOG overrides).
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit an inclusion to a CSV or JSON dataset.
    Fit {
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Override the chi-square threshold.
        #[arg(long)]
        alpha: Option<f64>,
        /// degenerate or noisy; noisy by default when points repeat.
        #[arg(long)]
        mode: Option<FitMode>,
        #[arg(long, default_value = "qip_out")]
        out: PathBuf,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Test whether OUTER can contain INNER.
    Check {
        inner: PathBuf,
        outer: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write check_report.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Fits to the shifted Anscombe quartet.
    Anscombe {
        /// Fixed offset coefficient on X_B.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value = "qip_out")]
        out: PathBuf,
    },
    /// Simulated frequency-response identification with a Bode envelope.
    Freq {
        /// Scenario JSON; built-in defaults when omitted.
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value = "qip_out")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<i32, QipError> {
    let solver = SolverConfig::default();
    match cli.command {
        Command::Fit {
            data,
            delta,
            alpha,
            mode,
            out,
        } => {
            let opts = FitOptions {
                delta,
                alpha,
                mode,
                out_dir: out.clone(),
                solver,
            };
            let o = cmd_fit(&data, &opts)?;
            let r = &o.report;
            println!("status: {}", r.status);
            if let Some(w) = r.width {
                println!("width: {w:.10e}");
            }
            println!("active points: {}", r.active_point_ids.join(", "));
            if let Some(m) = &r.message {
                println!("{m}");
            }
            println!("report: {}", out.join("report.json").display());
            Ok(o.exit_code)
        }
        Command::Demo {
            which: Demo::Anscombe { alpha, out },
        } => {
            let o = cmd_demo_anscombe(alpha, &out, &solver)?;
            for d in &o.report.datasets {
                println!(
                    "{}: {} active {:?}, slope {:.4}, spread {:.4}; LS slope {:.5}, intercept {:.5}",
                    d.fit.name, d.fit.status, d.fit.active, d.fit.slope, d.fit.spread, d.fit.ls_slope, d.fit.ls_intercept
                );
            }
            println!("artifacts in {}", out.display());
            Ok(o.exit_code)
        }
        Command::Demo {
            which: Demo::Freq {
                config,
                seed,
                delta,
                out,
            },
        } => {
            let opts = FreqOptions { config, seed, delta };
            let o = cmd_demo_freq(&opts, &out, &solver)?;
            let r = &o.report;
            println!("status: {} after {} Newton steps", r.status, r.newton_iterations);
            let show = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.6e}"));
            println!("QIP width {}, scaled LS width {}, gamma_min {}", show(r.qip_width), show(r.ls_width), show(r.gamma_min));
            println!("true curves inside envelope at {} of grid", show(r.containment_fraction));
            println!("artifacts in {}", out.display());
            Ok(o.exit_code)
        }
        Command::Check {
            inner,
            outer,
            samples,
            seed,
            out,
        } => {
            let o = cmd_check(&inner, &outer, &CheckOptions { samples, seed })?;
            print!("{}", o.report.describe());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("check_report.json"), to_json_string(&o.report)?)?;
            }
            Ok(o.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QIP_LOG", default)).init();
    info!("qip {}", env!("CARGO_PKG_VERSION"));
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
