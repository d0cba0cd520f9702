//! Command-line front end for `laqc-core`: family and swap sweeps, the
//! verification suites and the printed-formula audit.

pub mod audit;
pub mod config;
pub mod output;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use laqc_core::FamilyTag;
use serde_json::json;

use crate::config::{parse_grid, parse_xi, Config, Format, Grid, Slice, XiSpec};
use crate::output::{emit, RunManifest};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Parser)]
#[command(name = "laqc", version, about = "LAQC and correlation swapping for two-qubit X states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// LAQC and concurrence of one family over a parameter grid.
    FamilySweep(SweepArgs),
    /// Post-swap Bloch parameters, LAQC and concurrence.
    SwapSweep(SweepArgs),
    /// Run the verification suites; exit status 0 iff all pass.
    Verify(VerifyArgs),
    /// Check the published closed forms against the explicit pipeline.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted. A manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (default: from the file extension, else csv).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON config file (a previous run manifest also works).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: Option<FamilyTag>,
    /// Parameter grid start:stop:count.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Grid of the CD parameter for the fixed-xi slice (default: --grid).
    #[arg(long, value_parser = parse_grid)]
    pub grid2: Option<Grid>,
    /// Measurement angle (`0.5pi` or radians) or angle grid start:stop:count.
    #[arg(long, value_parser = parse_xi, allow_hyphen_values = true)]
    pub xi: Option<XiSpec>,
    #[arg(long, value_enum)]
    pub slice: Option<Slice>,
    /// Numerical oracle spot check on every k-th row (0 disables).
    #[arg(long)]
    pub oracle_every: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replace every suite tolerance with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Points per axis of the (p_AB, p_CD, xi) grid.
    #[arg(long)]
    pub density: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn with_file(flags: Config, output: &OutputArgs) -> CliResult<Config> {
    let flags = Config { out: output.out.clone(), format: output.format, ..flags };
    Ok(match &output.config {
        Some(p) => flags.or(Config::load(p)?),
        None => flags,
    })
}

fn sweep_config(a: &SweepArgs) -> CliResult<Config> {
    let flags = Config {
        family: a.family,
        grid: a.grid,
        grid2: a.grid2,
        xi: a.xi,
        slice: a.slice,
        oracle_every: a.oracle_every,
        ..Default::default()
    };
    with_file(flags, &a.output)
}

/// Runs a command; the returned code is the process exit status.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::FamilySweep(a) => {
            let mut cfg = sweep_config(&a)?;
            cfg.grid = Some(cfg.family_grid()?);
            cfg.oracle_every = Some(cfg.oracle_every.unwrap_or(10));
            let out = sweep::family_sweep(&cfg)?;
            let body = out.table.render(cfg.resolved_format())?;
            emit(cfg.out.as_deref(), &body, &RunManifest::new("family-sweep", &cfg, out.summary))?;
            Ok(0)
        }
        Command::SwapSweep(a) => {
            let mut cfg = sweep_config(&a)?;
            cfg.grid = Some(cfg.family_grid()?);
            cfg.xi = Some(cfg.xi_spec()?);
            let out = sweep::swap_sweep(&cfg)?;
            let body = out.table.render(cfg.resolved_format())?;
            emit(cfg.out.as_deref(), &body, &RunManifest::new("swap-sweep", &cfg, out.summary))?;
            Ok(0)
        }
        Command::Verify(a) => {
            let flags = Config { samples: a.samples, seed: a.seed, tol: a.tol, ..Default::default() };
            let mut cfg = with_file(flags, &a.output)?;
            let samples = *cfg.samples.get_or_insert(verify::DEFAULT_SAMPLES);
            let seed = *cfg.seed.get_or_insert(verify::DEFAULT_SEED);
            let report = verify::run(samples, seed, cfg.tol);
            let summary = json!({
                "passed": report.passed,
                "suites": report.suites.len(),
                "failed_suites": report.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect::<Vec<_>>(),
            });
            emit(cfg.out.as_deref(), &report.to_json()?, &RunManifest::new("verify", &cfg, summary))?;
            if let Some((suite, f)) = report.first_failure() {
                eprintln!("verify failed in {suite}: residual {:e}, case {}", f.residual, f.case);
                return Ok(1);
            }
            Ok(0)
        }
        Command::Audit(a) => {
            let mut cfg = with_file(Config { density: a.density, ..Default::default() }, &a.output)?;
            cfg.density = Some(cfg.density.unwrap_or(11));
            let (_, table, summary) = audit::run(&cfg)?;
            let body = table.render(cfg.resolved_format())?;
            emit(cfg.out.as_deref(), &body, &RunManifest::new("audit", &cfg, summary))?;
            Ok(0)
        }
    }
}
