use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use epibandit::harness::{
    cmd_benchmark, cmd_calibration, cmd_ground_truth, cmd_threshold, ExperimentConfig, PAPER_GROUND_TRUTH_RUNS,
};
use epibandit::Error;

#[derive(Parser)]
#[command(version, about = "Best-arm identification of vaccine allocation strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat TOML file with scenario and experiment keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate each strategy 1000 times for the ground truth.
    #[arg(long)]
    paper_scale: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every strategy at every r0 and write ground_truth.csv.
    GroundTruth(Common),
    /// Run the algorithms against the ground truth and write benchmark.csv.
    Benchmark(Common),
    /// Bin benchmark records by probability of success.
    Calibration(Common),
    /// Print the extinction probability and fade-out threshold.
    Threshold {
        #[command(flatten)]
        common: Common,
        /// Defaults to every entry of the config's r0_list.
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        dispersion: Option<f64>,
        #[arg(long)]
        controlled_fraction: Option<f64>,
        #[arg(long)]
        cutoff: Option<f64>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    if common.paper_scale {
        config.ground_truth_runs = PAPER_GROUND_TRUTH_RUNS;
    }
    if common.workers.is_some() {
        config.workers = common.workers;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::GroundTruth(common) => {
            let config = load(&common)?;
            let gt = cmd_ground_truth(&config)?;
            for &r0 in &config.r0_list {
                match gt.table.best_arm(r0) {
                    Some(best) => println!("r0={r0} best_strategy={best}"),
                    None => println!("r0={r0} best_strategy=none (no established runs)"),
                }
            }
            println!("wrote {}", config.output_dir.display());
        }
        Command::Benchmark(common) => {
            let config = load(&common)?;
            let records = cmd_benchmark(&config)?;
            println!("wrote {} records to {}", records.len(), config.output_dir.display());
        }
        Command::Calibration(common) => {
            let config = load(&common)?;
            let rows = cmd_calibration(&config)?;
            println!("wrote {} bins to {}", rows.len(), config.output_dir.display());
        }
        Command::Threshold { common, r0, dispersion, controlled_fraction, cutoff } => {
            let config = load(&common)?;
            let r0s = r0.map_or_else(|| config.r0_list.clone(), |r| vec![r]);
            for r in r0s {
                let report = cmd_threshold(
                    r,
                    dispersion.unwrap_or(config.dispersion),
                    controlled_fraction.unwrap_or(config.controlled_fraction),
                    cutoff.unwrap_or(config.cutoff),
                )?;
                println!("{report}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::MissingGroundTruth(_) | Error::MissingRecords(_) => 3,
                _ => 1,
            })
        }
    }
}
