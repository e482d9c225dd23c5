//! `ppi`: batch front end for the budget-allocation model.

mod analyses;
mod config;
mod data_cmds;
mod manifest;
mod sim_cmds;
mod study;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::Resolver;
use manifest::{write_manifest, Inputs, Output};

#[derive(Parser, Debug)]
#[command(name = "ppi", version, about = "Policy-priority inference: simulate, estimate, calibrate and analyse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags accepted by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML config with a [common] table and one table per subcommand; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo runs per ensemble [default: 1 for simulate, 100 for calibrate, 1000 otherwise]
    #[arg(long)]
    pub runs: Option<usize>,
    /// Worker threads; 0 uses all cores. Never changes the outputs [default: 0]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory
    #[arg(long, env = "PPI_OUT_DIR", default_value = "out")]
    pub out: PathBuf,
    /// Exit with status 2 when any run hits max_steps without converging
    #[arg(long)]
    pub strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize a raw long-format panel to [0, 1] and orient it with GDP
    Normalize(data_cmds::NormalizeArgs),
    /// Estimate spillover networks from a normalized panel
    EstimateNetwork(data_cmds::EstimateArgs),
    /// Run one traced simulation (and optionally an ensemble)
    Simulate(sim_cmds::SimulateArgs),
    /// Calibrate γ per country against empirical corruption
    Calibrate(sim_cmds::CalibrateArgs),
    /// Retrospective allocation profiles and the corruption-performance table
    Retrospective(analyses::RetrospectiveArgs),
    /// Development footprints towards countries of the next cluster up
    Prospective(analyses::ProspectiveArgs),
    /// Re-run ensembles with mechanisms switched off
    Sensitivity(analyses::SensitivityArgs),
}

/// Settings every command resolves.
pub struct Ctx {
    pub seed: u64,
    pub jobs: usize,
    pub runs: usize,
}

/// Convergence tally reported back to `main`.
#[derive(Default)]
pub struct Status {
    pub runs: usize,
    pub non_converged: usize,
}

impl Status {
    pub fn add(&mut self, runs: usize, non_converged: usize) {
        self.runs += runs;
        self.non_converged += non_converged;
    }
}

pub fn num(v: f64) -> String {
    v.to_string()
}

fn execute(name: &str, common: &Common, default_runs: usize, body: impl FnOnce(&Ctx, &mut Resolver, &mut Inputs, &mut Output) -> Result<Status>) -> Result<(Status, bool)> {
    let mut r = Resolver::load(common.config.as_deref(), name)?;
    let mut inputs = Inputs::default();
    if let Some(c) = &common.config {
        inputs.add(c);
    }
    let ctx = Ctx {
        seed: r.get("seed", common.seed, 0u64)?,
        jobs: r.transient("jobs", common.jobs, 0usize)?,
        runs: r.get("runs", common.runs, default_runs)?,
    };
    let strict = r.get("strict", common.strict.then_some(true), false)?;
    let mut out = Output::new(&common.out)?;
    let status = body(&ctx, &mut r, &mut inputs, &mut out)?;
    r.check_unknown()?;
    write_manifest(&mut out, name, &r, &inputs)?;
    Ok((status, strict))
}

fn dispatch(cli: Cli) -> Result<(Status, bool)> {
    let (name, common) = match &cli.command {
        Command::Normalize(a) => ("normalize", &a.common),
        Command::EstimateNetwork(a) => ("estimate-network", &a.common),
        Command::Simulate(a) => ("simulate", &a.common),
        Command::Calibrate(a) => ("calibrate", &a.common),
        Command::Retrospective(a) => ("retrospective", &a.common),
        Command::Prospective(a) => ("prospective", &a.common),
        Command::Sensitivity(a) => ("sensitivity", &a.common),
    };
    match &cli.command {
        Command::Normalize(a) => execute(name, common, 1, |c, r, i, o| data_cmds::normalize(a, c, r, i, o)),
        Command::EstimateNetwork(a) => execute(name, common, 1, |c, r, i, o| data_cmds::estimate(a, c, r, i, o)),
        Command::Simulate(a) => execute(name, common, 1, |c, r, i, o| sim_cmds::simulate(a, c, r, i, o)),
        Command::Calibrate(a) => execute(
            name,
            common,
            ppi_core::calibration::DEFAULT_CALIBRATION_RUNS,
            |c, r, i, o| sim_cmds::calibrate(a, c, r, i, o),
        ),
        Command::Retrospective(a) => execute(name, common, ppi_core::model::ensemble::DEFAULT_RUNS, |c, r, i, o| {
            analyses::retrospective(a, c, r, i, o)
        }),
        Command::Prospective(a) => execute(name, common, ppi_core::model::ensemble::DEFAULT_RUNS, |c, r, i, o| {
            analyses::prospective(a, c, r, i, o)
        }),
        Command::Sensitivity(a) => execute(name, common, ppi_core::model::ensemble::DEFAULT_RUNS, |c, r, i, o| {
            analyses::sensitivity(a, c, r, i, o)
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((status, strict)) => {
            if status.non_converged > 0 {
                eprintln!(
                    "warning: {} of {} runs reached max_steps without converging",
                    status.non_converged, status.runs
                );
                if strict {
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
