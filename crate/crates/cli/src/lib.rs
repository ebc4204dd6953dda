//! Batch front end: `run`, `convergence-report`, `compare-radii` and `dump-basis`.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::CompareOptions;
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "platesoil", version, about = "Circular plate on an elastic half-space")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sequential, fixed-order execution.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Worker threads for the frequency sweep (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the grid and write coefficients, spectra, time series and soil snapshots.
    Run,
    /// S-matrix error against a high-budget reference for a node schedule.
    ConvergenceReport {
        /// Comma-separated total node budgets (default: from the config).
        #[arg(long, value_delimiter = ',')]
        nodes_schedule: Option<Vec<usize>>,
        /// Comma-separated frequencies in rad/s (default: from the config).
        #[arg(long, value_delimiter = ',')]
        omegas: Option<Vec<f64>>,
    },
    /// Compare S matrices and center deflection across plate radii.
    CompareRadii {
        /// Comma-separated radii in meters.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        /// Scale the mode count with the radius.
        #[arg(long)]
        scale_modes: bool,
    },
    /// Write the mode basis only.
    DumpBasis,
}

/// Loads the config and applies command-line overrides. The file itself is never written.
pub fn load_config(path: &Path, global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_path(path)?;
    if let Some(out) = &global.out {
        cfg.output_dir = out.clone();
    }
    if global.deterministic {
        cfg.deterministic = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Executes a parsed command line; returns the output directory.
pub fn execute(cli: &Cli) -> Result<PathBuf, CliError> {
    let path = cli
        .global
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let cfg = load_config(path, &cli.global)?;
    let work = || -> Result<(), CliError> {
        match &cli.command {
            Command::Run => commands::run(&cfg).map(|_| ()),
            Command::ConvergenceReport { nodes_schedule, omegas } => {
                let schedule = nodes_schedule.clone().unwrap_or_else(|| cfg.convergence.node_schedule.clone());
                let omegas = omegas.clone().unwrap_or_else(|| cfg.convergence.omegas_rad_per_s.clone());
                commands::convergence_report(&cfg, &schedule, &omegas).map(|_| ())
            }
            Command::CompareRadii { radii, scale_modes } => commands::compare_radii(
                &cfg,
                &CompareOptions {
                    radii_m: radii.clone(),
                    scale_modes: *scale_modes,
                },
            )
            .map(|_| ()),
            Command::DumpBasis => commands::dump_basis(&cfg).map(|_| ()),
        }
    };
    let threads = match cli.global.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(work)?;
    Ok(cfg.output_dir.clone())
}
