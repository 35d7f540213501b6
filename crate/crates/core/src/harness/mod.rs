//! Experiment pipeline: ground-truth tables, success-rate benchmarks,
//! probability-of-success calibration and the fade-out threshold report.
//!
//! Every command reads its inputs from and writes its CSV output to
//! `ExperimentConfig::output_dir`. Random streams are derived from the master
//! seed and the coordinates of each unit of work, so outputs are byte-identical
//! for a given config regardless of the number of workers.

mod benchmark;
mod calibration;
mod config;
mod ground_truth;
pub mod seed;

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use benchmark::{
    cmd_benchmark, run_benchmark, run_replicate, success_rates, synthetic_from_ground_truth, RunRecord, SuccessRate,
};
pub use calibration::{calibration_edges, calibration_table, cmd_calibration, CalibrationRow};
pub use config::{
    default_budgets, EnvironmentKind, ExperimentConfig, DESK_GROUND_TRUTH_RUNS, PAPER_GROUND_TRUTH_RUNS,
};
pub use ground_truth::{
    cmd_ground_truth, compute_ground_truth, evaluate_strategies, GroundTruth, GroundTruthTable, OutcomeSample,
    StrategySummary,
};

use crate::error::{Error, Result};
use crate::threshold::{extinction_probability, threshold_from_extinction, OffspringModel};

pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";
pub const GROUND_TRUTH_SAMPLES_FILE: &str = "ground_truth_samples.csv";
pub const BENCHMARK_FILE: &str = "benchmark.csv";
pub const SUCCESS_RATE_FILE: &str = "success_rate.csv";
pub const CALIBRATION_FILE: &str = "calibration.csv";

pub(crate) fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(std::io::BufReader::new(file)).deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub r0: f64,
    pub dispersion: f64,
    pub controlled_fraction: f64,
    pub cutoff: f64,
    pub extinction_probability: f64,
    pub threshold: u64,
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r0={} dispersion={} controlled_fraction={} cutoff={:e} p_ext={:.12} T0={}",
            self.r0, self.dispersion, self.controlled_fraction, self.cutoff, self.extinction_probability, self.threshold
        )
    }
}

pub fn cmd_threshold(r0: f64, dispersion: f64, controlled_fraction: f64, cutoff: f64) -> Result<ThresholdReport> {
    let model = OffspringModel::new(r0, dispersion, controlled_fraction)?;
    if !model.is_supercritical() {
        return Err(Error::Subcritical { effective_r: model.effective_r() });
    }
    let p = extinction_probability(&model, 1e-12)?;
    Ok(ThresholdReport {
        r0,
        dispersion,
        controlled_fraction,
        cutoff,
        extinction_probability: p,
        threshold: threshold_from_extinction(p, cutoff)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threshold::fade_out_threshold;

    #[test]
    fn threshold_matches_library() {
        let report = cmd_threshold(1.4, 0.5, 0.0, 1e-10).unwrap();
        let model = OffspringModel::new(1.4, 0.5, 0.0).unwrap();
        assert_eq!(report.threshold, fade_out_threshold(&model, 1e-10).unwrap());
        assert_eq!(report.extinction_probability, extinction_probability(&model, 1e-12).unwrap());
        assert!(report.to_string().contains("T0=105"));
    }

    #[test]
    fn subcritical_report() {
        assert!(matches!(cmd_threshold(0.9, 0.5, 0.0, 1e-10), Err(Error::Subcritical { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/rows.csv");
        let rows = vec![StrategySummary {
            r0: 1.4,
            strategy_index: 3,
            n_runs: 10,
            n_established: 0,
            mean_outcome: None,
            std_outcome: None,
        }];
        write_csv(&path, &rows).unwrap();
        let back: Vec<StrategySummary> = read_csv(&path).unwrap();
        assert_eq!(back, rows);
    }
}
