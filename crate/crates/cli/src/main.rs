//! `netspill`: command-line front end for the netspill library.
//!
//! Every run reads an optional TOML config, applies command-line overrides,
//! writes its CSV outputs into the output directory and finishes with a
//! `manifest.json` that `netspill rerun` accepts.

mod commands;
mod config;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netspill::ErrorClass;

use crate::config::{parse_config, Command, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] netspill::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) => match e.class() {
                ErrorClass::Parameter => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Io => 4,
            },
            CliError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "netspill",
    version,
    about = "SIR epidemics and spillover on two coupled networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Normalized epidemic threshold against reservoir strength, per coupling level.
    ThresholdCurve(RunArgs),
    /// Node-level mean-field trajectory.
    Meanfield(RunArgs),
    /// One stochastic realization.
    Simulate(RunArgs),
    /// Spillover probability against the inter-link fraction.
    SweepLinks(RunArgs),
    /// Spillover probability against the inter-layer rate beta12.
    SweepBeta(RunArgs),
    /// Critical beta12 for each link fraction.
    Boundary(RunArgs),
    /// Reservoir rate giving a target mean outbreak size.
    Calibrate(RunArgs),
    /// Minimal spillover link counts across topologies.
    TopologyCompare(RunArgs),
    /// Repeat the run recorded in a manifest.
    Rerun {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides `master_seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    realizations: Option<usize>,
    /// Comma-separated grid for the command's swept parameter: tau2,
    /// link fraction or beta12.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// Comma-separated coupling probabilities for `threshold-curve`.
    #[arg(long, value_delimiter = ',')]
    omegas: Option<Vec<f64>>,
}

const DEFAULT_OUT: &str = "netspill-out";

impl RunArgs {
    fn overrides(self, command: Command) -> RunConfig {
        let mut over = RunConfig {
            command: Some(command),
            master_seed: self.seed,
            out: self.out,
            threads: self.threads,
            realizations: self.realizations,
            omegas: self.omegas,
            ..Default::default()
        };
        match command {
            Command::ThresholdCurve => over.tau2_grid = self.grid,
            Command::SweepLinks | Command::Boundary => over.fraction_grid = self.grid,
            Command::SweepBeta => over.beta12_grid = self.grid,
            _ => {}
        }
        over
    }
}

fn resolve(sub: Sub) -> Result<RunConfig, CliError> {
    let (command, args) = match sub {
        Sub::Rerun {
            manifest,
            out,
            threads,
        } => {
            let m = manifest::Manifest::load(&manifest)?;
            return Ok(m.config.merge(RunConfig {
                out,
                threads,
                ..Default::default()
            }));
        }
        Sub::ThresholdCurve(a) => (Command::ThresholdCurve, a),
        Sub::Meanfield(a) => (Command::Meanfield, a),
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::SweepLinks(a) => (Command::SweepLinks, a),
        Sub::SweepBeta(a) => (Command::SweepBeta, a),
        Sub::Boundary(a) => (Command::Boundary, a),
        Sub::Calibrate(a) => (Command::Calibrate, a),
        Sub::TopologyCompare(a) => (Command::TopologyCompare, a),
    };
    let base = match &args.config {
        Some(path) => parse_config(path)?,
        None => RunConfig::default(),
    };
    let cfg = base.merge(args.overrides(command));
    cfg.check_ranges()?;
    Ok(cfg)
}

fn run(sub: Sub) -> Result<(), CliError> {
    let mut cfg = resolve(sub)?;
    cfg.master_seed()?;
    let command = cfg
        .command
        .ok_or_else(|| CliError::Config("key `command`: missing".into()))?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("key `threads`: {e}")))?;
    }
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    // The manifest must not pin the output location or the thread count;
    // neither affects results.
    cfg.out = None;
    cfg.threads = None;
    let mut outputs = commands::Outputs::new(&out_dir)?;
    commands::dispatch(command, &cfg, &mut outputs)?;
    manifest::Manifest::new(cfg, outputs.files.clone()).save(&outputs.path(manifest::MANIFEST_FILE))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netspill: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
