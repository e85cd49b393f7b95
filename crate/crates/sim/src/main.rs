use std::path::PathBuf;

use anyhow::{Context, Result};
use beamtrack::config::{
    scheme_name, AlgorithmChoice, ExperimentConfig, ScheduleKind, ScheduleLabel,
};
use beamtrack::output::{emit_results, write_manifest};
use beamtrack::run_monte_carlo;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beamtrack", version = env!("BEAMTRACK_VERSION"), about = "mmWave channel tracking simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write CSV results.
    Simulate(SimulateArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// TOML experiment configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo runs per cell.
    #[arg(long)]
    runs: Option<usize>,
    /// cs | pcs | beamsweep | all
    #[arg(long)]
    algorithm: Option<AlgorithmChoice>,
    /// aperiodic | periodic
    #[arg(long)]
    schedule: Option<ScheduleKind>,
    /// Overhead budget(s) for periodic tracking, comma separated.
    #[arg(long, value_delimiter = ',')]
    omax: Option<Vec<f64>>,
    /// SNR values in dB, comma separated, e.g. "-10,-5,0,5,10".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr: Option<Vec<f64>>,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = args.runs {
        cfg.mc_runs = runs;
    }
    if let Some(a) = args.algorithm {
        cfg.algorithm = a;
    }
    if let Some(s) = args.schedule {
        cfg.schedule = s;
    }
    if let Some(o) = args.omax {
        cfg.o_max = o;
    }
    if let Some(snr) = args.snr {
        cfg.snr_db = snr;
    }
    cfg.validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let table = pool.install(|| run_monte_carlo(&cfg))?;

    let mut outputs = emit_results(&table, &args.out)?;
    outputs.push(write_manifest(&cfg, &outputs, &args.out)?);
    for row in &table.rows {
        eprintln!(
            "{:<9} {:<16} snr={:>6} dB  rmse aod/aoa = {:.3}/{:.3} deg  se = {:.3}  overhead = {:.4}",
            scheme_name(row.scheme),
            ScheduleLabel(row.schedule).to_string(),
            row.snr_db,
            row.rmse_aod_deg,
            row.rmse_aoa_deg,
            row.mean_se,
            row.overhead
        );
    }
    for p in outputs {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => simulate(args),
    }
}
