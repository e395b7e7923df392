//! Command-line front end: bound tables, Galerkin solves, the
//! verification suite, asymptotic tables and the cutoff probe sweep.
//!
//! Exit codes: 0 when all work (and every verification check) succeeded,
//! 1 when a verification check failed, 2 on configuration or
//! infrastructure errors.

use clap::{Args, Parser, Subcommand};
use speclog::harness::{
    cmd_asymptotics, cmd_bounds, cmd_cutoff, cmd_solve, cmd_verify, ExperimentConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "speclog",
    version,
    about = "Spectral bounds and a sine-basis Galerkin solver for the fractional-logarithmic Laplacian on boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured seed for randomized property suites.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the per-rank bound and asymptotics table as CSV.
    Bounds(Common),
    /// Assemble (or load) the form matrix, solve, and write the spectrum.
    Solve(Common),
    /// Run the full verification suite and write a JSON report.
    Verify(Common),
    /// Emit Karamata-ratio and Weyl-sum consistency tables.
    Asymptotics(Common),
    /// Probe the cutoff plane-wave energy over radius/width grids.
    Cutoff {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ball radii.
        #[arg(long, value_delimiter = ',', default_value = "20,30,40")]
        r_list: Vec<f64>,
        /// Comma-separated layer widths.
        #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1")]
        sigma_list: Vec<f64>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, speclog::harness::HarnessError> {
    let mut cfg = ExperimentConfig::from_json_file(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn init_threads() {
    if let Ok(value) = std::env::var("SPECLOG_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run() -> Result<bool, speclog::harness::HarnessError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Bounds(common) => {
            let path = cmd_bounds(&load(common)?)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Solve(common) => {
            let path = cmd_solve(&load(common)?)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Verify(common) => {
            let (path, passed) = cmd_verify(&load(common)?)?;
            println!("wrote {}", path.display());
            Ok(passed)
        }
        Command::Asymptotics(common) => {
            let path = cmd_asymptotics(&load(common)?)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Cutoff {
            common,
            r_list,
            sigma_list,
        } => {
            let (probe, fit) = cmd_cutoff(&load(common)?, r_list, sigma_list)?;
            println!("wrote {} and {}", probe.display(), fit.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    init_threads();
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
