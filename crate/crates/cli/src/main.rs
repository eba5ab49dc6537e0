//! `hnslab`: batch runner for the spectral laboratory.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Experiment, Resolver};
use crate::error::{CliError, Status};
use crate::output::Artifacts;

#[derive(Parser)]
#[command(name = "hnslab", version, about = "Relaxed Navier-Stokes spectral experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Artifact directory; overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent runs.
    #[arg(long, env = "HNSLAB_WORKERS")]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Damped-wave propagator against the whole-plane oracle.
    DwVerify(Common),
    /// One Navier-Stokes or hyperbolic run with norm series and snapshots.
    Simulate(Common),
    /// Relaxation family against a Navier-Stokes reference.
    RelaxLimit(Common),
    /// Regularity integral, Gronwall constant and representation residual.
    Monitor(Common),
    /// Stability map over relaxation times and amplitudes.
    TauScan(Common),
    /// Itemized smallness sum of the initial data.
    Smallness(Common),
}

fn run(experiment: Experiment, common: &Common) -> Result<Status, CliError> {
    let scenario = config::load(&common.config)?;
    let resolver = Resolver::new(&scenario, experiment)?;
    let dir = match (&common.out, scenario.output.as_ref().and_then(|o| o.directory.as_ref())) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => PathBuf::from("hnslab-out"),
    };
    if common.workers == Some(0) {
        return Err(CliError::config("--workers", "must be at least 1"));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = common.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build()?;
    let art = Artifacts::create(&dir, &scenario, experiment)?;
    log::info!("{} -> {}", experiment.name(), dir.display());
    match experiment {
        Experiment::DwVerify => commands::dw_verify_cmd(&resolver, &art),
        Experiment::Simulate => commands::simulate(&resolver, &art),
        Experiment::RelaxLimit => commands::relax_limit(&resolver, &art, &pool),
        Experiment::Monitor => commands::monitor(&resolver, &art, &pool),
        Experiment::TauScan => commands::tau_scan(&resolver, &art, &pool),
        Experiment::Smallness => commands::smallness(&resolver, &art),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let (experiment, common) = match &cli.command {
        Command::DwVerify(c) => (Experiment::DwVerify, c),
        Command::Simulate(c) => (Experiment::Simulate, c),
        Command::RelaxLimit(c) => (Experiment::RelaxLimit, c),
        Command::Monitor(c) => (Experiment::Monitor, c),
        Command::TauScan(c) => (Experiment::TauScan, c),
        Command::Smallness(c) => (Experiment::Smallness, c),
    };
    match run(experiment, common) {
        Ok(status) => {
            match status {
                Status::Success => {}
                Status::Unstable => log::error!("run became unstable; artifacts are partial"),
                Status::ToleranceFailure => log::error!("verification outside tolerance"),
            }
            status.exit_code()
        }
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}
