//! Ground truth, benchmark and calibration end to end on a small config,
//! writing CSV files to a temporary directory.
//!
//!     cargo run --release --example pipeline

use epibandit::harness::{cmd_benchmark, cmd_calibration, cmd_ground_truth, ExperimentConfig};

fn main() -> epibandit::Result<()> {
    let out = std::env::temp_dir().join("epibandit-pipeline-example");
    let text = format!(
        "r0_list = [1.4]\nbudgets = [64, 160]\nreplicates = 20\nground_truth_runs = 60\noutput_dir = \"{}\"\n",
        out.display()
    );
    let config = ExperimentConfig::from_toml_str(&text, std::path::Path::new("."))?;

    let truth = cmd_ground_truth(&config)?;
    println!("best strategy at r0 1.4: {:?}", truth.table.best_arm(1.4));

    let records = cmd_benchmark(&config)?;
    let correct = records.iter().filter(|r| r.correct).count();
    println!("{correct} of {} benchmark replicates correct", records.len());

    let bins = cmd_calibration(&config)?;
    for row in bins.iter().filter(|r| r.trials > 0) {
        println!("[{:.2}, {:.2}) {} trials, {} correct", row.lower_edge, row.upper_edge, row.trials, row.successes);
    }
    println!("CSV files in {}", out.display());
    Ok(())
}
