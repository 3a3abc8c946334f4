//! Batch command-line front end.

pub mod chart;
pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use clap::Parser;

use crate::engine::{run_sweep_with, SweepOptions, GENERATOR};
use crate::error::{Error, Result};
use crate::stats::{AnalyticRow, PointSummary};

pub use chart::{emit_chart, render_chart};
pub use config::{parse_key_values, Mode, RunConfig};
pub use csv::{emit_csv, parse_csv, render_csv, CsvRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// Simulate teleportation requests in a hub-and-spoke multi-QPU network and
/// compare a naive sequential policy against an orchestrated one.
#[derive(Debug, Parser)]
#[command(name = "teleport-sim", version)]
pub struct Cli {
    /// key=value configuration file; flags override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// simulate | analytic | both
    #[arg(long)]
    pub mode: Option<String>,
    /// master seed for all random streams
    #[arg(long, value_name = "U64")]
    pub seed: Option<String>,
    /// requests per sweep point
    #[arg(long, value_name = "U32")]
    pub trials: Option<String>,
    /// comma-separated network sizes, each >= 2, strictly increasing
    #[arg(long, value_name = "N,N,...")]
    pub grid: Option<String>,
    /// base per-attempt success probability
    #[arg(long, value_name = "F")]
    pub p0: Option<String>,
    /// scale attenuation coefficient
    #[arg(long, value_name = "F")]
    pub beta: Option<String>,
    /// parallelism coefficient
    #[arg(long, value_name = "F")]
    pub kappa: Option<String>,
    /// round budget per request
    #[arg(long, value_name = "U32")]
    pub rounds: Option<String>,
    /// spare pairs kept per node pair
    #[arg(long, value_name = "U32")]
    pub cache_capacity: Option<String>,
    /// comma-separated: naive, orchestrated
    #[arg(long)]
    pub policies: Option<String>,
    /// output CSV path
    #[arg(long, value_name = "PATH")]
    pub csv: Option<String>,
    /// output SVG chart path
    #[arg(long, value_name = "PATH")]
    pub svg: Option<String>,
    /// all | served
    #[arg(long)]
    pub attempts_denominator: Option<String>,
    /// worker threads across sweep points (0 = all cores)
    #[arg(long, value_name = "COUNT")]
    pub threads: Option<String>,
}

impl Cli {
    fn flag_pairs(&self) -> Vec<(&'static str, &str)> {
        let flags: [(&'static str, &Option<String>); 14] = [
            ("mode", &self.mode),
            ("master_seed", &self.seed),
            ("trials", &self.trials),
            ("grid", &self.grid),
            ("p0", &self.p0),
            ("beta", &self.beta),
            ("kappa", &self.kappa),
            ("round_budget", &self.rounds),
            ("cache_capacity", &self.cache_capacity),
            ("policies", &self.policies),
            ("csv_path", &self.csv),
            ("svg_path", &self.svg),
            ("attempts_denominator", &self.attempts_denominator),
            ("threads", &self.threads),
        ];
        flags
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }
}

/// Merges config-file text (if any) with command-line flags.
pub fn parse_config(file_text: Option<&str>, cli: &Cli) -> Result<RunConfig> {
    let file_pairs = match file_text {
        Some(text) => parse_key_values(text)?,
        None => Vec::new(),
    };
    let pairs = file_pairs
        .iter()
        .map(|(k, v)| (*k, v.as_str()))
        .chain(cli.flag_pairs());
    RunConfig::from_pairs(pairs)
}

/// Tables produced by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summaries: Vec<PointSummary>,
    pub analytic: Vec<AnalyticRow>,
}

/// Runs the configured sweep and writes the CSV (and chart, if requested).
/// `progress` receives one line per finished point.
pub fn execute(cfg: &RunConfig, progress: &mut (dyn Write + Send)) -> Result<RunOutput> {
    let spec = &cfg.spec;
    let summaries = if cfg.mode.simulates() {
        let sink = Mutex::new(progress);
        let options = SweepOptions {
            threads: cfg.threads,
            denominator: cfg.attempts_denominator,
        };
        run_sweep_with(spec, options, |s| {
            let mut out = sink.lock().unwrap_or_else(|e| e.into_inner());
            let _ = writeln!(
                out,
                "N={:<5} {:<12} success={:.4} (se {:.4}) attempts={:.3} cache_hits={}",
                s.n,
                s.policy.name(),
                s.success_rate,
                s.success_stderr,
                s.mean_attempts,
                s.cache_hits
            );
        })?
    } else {
        Vec::new()
    };

    let analytic = if cfg.mode.includes_analytic() {
        spec.points()
            .into_iter()
            .map(|(n, policy)| {
                AnalyticRow::compute(n, policy, spec.params(), cfg.attempts_denominator)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    emit_csv(&summaries, &analytic, &cfg.csv_path)?;
    if let Some(svg) = &cfg.svg_path {
        emit_chart(&summaries, &analytic, svg)?;
    }
    Ok(RunOutput {
        summaries,
        analytic,
    })
}

fn exit_code(err: &Error) -> i32 {
    if err.is_io() {
        EXIT_IO
    } else {
        EXIT_CONFIG
    }
}

/// Entry point behind the binary. Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };

    let file_text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read config {}: {e}", path.display());
                return EXIT_IO;
            }
        },
        None => None,
    };

    let cfg = match parse_config(file_text.as_deref(), &cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run with --help for usage");
            return EXIT_CONFIG;
        }
    };

    let mut stdout = std::io::stdout();
    match execute(&cfg, &mut stdout) {
        Ok(out) => {
            let rows = out.summaries.len() + out.analytic.len();
            println!(
                "wrote {rows} rows to {} (seed {}, {GENERATOR})",
                cfg.csv_path.display(),
                cfg.spec.params().master_seed()
            );
            if let Some(svg) = &cfg.svg_path {
                println!("wrote chart to {}", svg.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
