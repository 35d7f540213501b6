use serde::{Deserialize, Serialize};

use super::benchmark::RunRecord;
use super::config::ExperimentConfig;
use super::{read_csv, write_csv, BENCHMARK_FILE, CALIBRATION_FILE};
use crate::bandit::Algorithm;
use crate::confidence::bin_success_calibration;
use crate::error::{Error, Result};

/// An underflow bin `[0, 0.5)` followed by `[0.5, 1]` in steps of 0.05.
pub fn calibration_edges() -> Vec<f64> {
    std::iter::once(0.0).chain((0..=10).map(|i| (50 + 5 * i) as f64 / 100.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub algorithm: Algorithm,
    pub r0: f64,
    pub lower_edge: f64,
    pub upper_edge: f64,
    pub trials: u64,
    pub successes: u64,
    pub rate: Option<f64>,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
}

/// Bins records that carry a probability of success, per algorithm and r0.
/// Only TTTS is binned unless `ps_all_algorithms` is set.
pub fn calibration_table(config: &ExperimentConfig, records: &[RunRecord]) -> Result<Vec<CalibrationRow>> {
    let algorithms: Vec<Algorithm> =
        if config.ps_all_algorithms { config.algorithms.clone() } else { vec![Algorithm::Ttts] };
    let edges = calibration_edges();
    let mut rows = Vec::new();
    for &a in &algorithms {
        for &r0 in &config.r0_list {
            let pairs: Vec<(f64, bool)> = records
                .iter()
                .filter(|r| r.algorithm == a && r.r0 == r0)
                .filter_map(|r| r.p_success.map(|p| (p, r.correct)))
                .collect();
            for bin in bin_success_calibration(&pairs, &edges)? {
                rows.push(CalibrationRow {
                    algorithm: a,
                    r0,
                    lower_edge: bin.lower_edge,
                    upper_edge: bin.upper_edge,
                    trials: bin.trials,
                    successes: bin.successes,
                    rate: bin.rate,
                    ci_lower: bin.ci_lower,
                    ci_upper: bin.ci_upper,
                });
            }
        }
    }
    Ok(rows)
}

/// Reads benchmark records from the output directory and writes the calibration table.
pub fn cmd_calibration(config: &ExperimentConfig) -> Result<Vec<CalibrationRow>> {
    let path = config.output_dir.join(BENCHMARK_FILE);
    if !path.exists() {
        return Err(Error::MissingRecords(path));
    }
    let records: Vec<RunRecord> = read_csv(&path)?;
    let rows = calibration_table(config, &records)?;
    write_csv(&config.output_dir.join(CALIBRATION_FILE), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p: Option<f64>, correct: bool) -> RunRecord {
        RunRecord {
            algorithm: Algorithm::Ttts,
            r0: 1.4,
            budget: 100,
            replicate: 0,
            recommended_arm: Some(0),
            correct,
            p_success: p,
            pulls_json: "[]".into(),
            wall_ms: 0.0,
        }
    }

    #[test]
    fn edges() {
        let e = calibration_edges();
        assert_eq!(e.len(), 12);
        assert_eq!(e[1], 0.5);
        assert_eq!(e[2], 0.55);
        assert_eq!(e[11], 1.0);
    }

    #[test]
    fn empty_records_give_zero_trial_bins() {
        let c = ExperimentConfig { r0_list: vec![1.4], ..Default::default() };
        let rows = calibration_table(&c, &[]).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.trials == 0 && r.rate.is_none()));
    }

    #[test]
    fn bins_partition_records() {
        let c = ExperimentConfig { r0_list: vec![1.4], ..Default::default() };
        let ps = [0.0, 0.1, 0.5, 0.52, 0.77, 0.99, 1.0, 1.0];
        let mut records: Vec<RunRecord> = ps.iter().map(|&p| record(Some(p), p > 0.6)).collect();
        records.push(record(None, false));
        let rows = calibration_table(&c, &records).unwrap();
        assert_eq!(rows.iter().map(|r| r.trials).sum::<u64>(), ps.len() as u64);
        assert_eq!(rows[0].trials, 2);
        assert_eq!(rows[10].trials, 3);
    }
}
