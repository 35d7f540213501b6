use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::seed::{stream, Domain};
use super::{read_csv, write_csv, GROUND_TRUTH_FILE, GROUND_TRUTH_SAMPLES_FILE};
use crate::error::{Error, Result};
use crate::sim::{enumerate_strategies, simulate, CalibratedScenario, VaccineStrategy};

/// Outcome summary of one strategy at one r0. Moments cover established runs only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub r0: f64,
    pub strategy_index: usize,
    pub n_runs: u64,
    pub n_established: u64,
    pub mean_outcome: Option<f64>,
    pub std_outcome: Option<f64>,
}

impl StrategySummary {
    pub fn establishment_rate(&self) -> f64 {
        self.n_established as f64 / self.n_runs as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSample {
    pub r0: f64,
    pub strategy_index: usize,
    pub run: u64,
    pub outcome: f64,
    pub established: bool,
    pub cumulative_infections: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruthTable {
    rows: Vec<StrategySummary>,
}

impl GroundTruthTable {
    pub fn new(rows: Vec<StrategySummary>) -> GroundTruthTable {
        GroundTruthTable { rows }
    }

    pub fn rows(&self) -> &[StrategySummary] {
        &self.rows
    }

    /// Rows at `r0`, ordered by strategy index.
    pub fn at(&self, r0: f64) -> Vec<&StrategySummary> {
        let mut rows: Vec<_> = self.rows.iter().filter(|r| r.r0 == r0).collect();
        rows.sort_by_key(|r| r.strategy_index);
        rows
    }

    /// Strategy with the smallest established-run mean outcome at `r0`.
    pub fn best_arm(&self, r0: f64) -> Option<usize> {
        self.at(r0)
            .into_iter()
            .filter_map(|r| r.mean_outcome.map(|m| (r.strategy_index, m)))
            .fold(None, |best: Option<(usize, f64)>, (i, m)| match best {
                Some((_, b)) if b <= m => best,
                _ => Some((i, m)),
            })
            .map(|(i, _)| i)
    }

    pub fn read(path: &Path) -> Result<GroundTruthTable> {
        if !path.exists() {
            return Err(Error::MissingGroundTruth(path.to_path_buf()));
        }
        Ok(GroundTruthTable { rows: read_csv(path)? })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub table: GroundTruthTable,
    pub samples: Vec<OutcomeSample>,
}

fn summarize(r0: f64, strategy: &VaccineStrategy, samples: &[OutcomeSample]) -> StrategySummary {
    let established: Vec<f64> = samples.iter().filter(|s| s.established).map(|s| s.outcome).collect();
    let n = established.len();
    let mean = (n > 0).then(|| established.iter().sum::<f64>() / n as f64);
    let std = mean.filter(|_| n > 1).map(|m| {
        (established.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    });
    StrategySummary {
        r0,
        strategy_index: strategy.index(),
        n_runs: samples.len() as u64,
        n_established: n as u64,
        mean_outcome: mean,
        std_outcome: std,
    }
}

/// Evaluates every strategy `runs` times at `r0`. Each strategy draws from its
/// own stream, so results do not depend on the worker count.
pub fn evaluate_strategies(config: &ExperimentConfig, r0: f64, runs: usize) -> Result<GroundTruth> {
    let calibrated = CalibratedScenario::new(config.scenario_at(r0)?)?;
    let strategies = enumerate_strategies();
    let per_strategy: Vec<Vec<OutcomeSample>> = config.thread_pool()?.install(|| {
        strategies
            .par_iter()
            .map(|strategy| {
                let mut rng = stream(config.master_seed, Domain::GroundTruth, &[r0.to_bits(), strategy.index() as u64]);
                (0..runs as u64)
                    .map(|run| {
                        let r = simulate(&calibrated, strategy, &mut rng);
                        OutcomeSample {
                            r0,
                            strategy_index: strategy.index(),
                            run,
                            outcome: r.outcome,
                            established: r.established,
                            cumulative_infections: r.cumulative_infections,
                        }
                    })
                    .collect()
            })
            .collect()
    });
    let rows = strategies.iter().zip(&per_strategy).map(|(s, samples)| summarize(r0, s, samples)).collect();
    Ok(GroundTruth { table: GroundTruthTable::new(rows), samples: per_strategy.into_iter().flatten().collect() })
}

/// Ground truth for every r0 in the config.
pub fn compute_ground_truth(config: &ExperimentConfig) -> Result<GroundTruth> {
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for &r0 in &config.r0_list {
        let gt = evaluate_strategies(config, r0, config.ground_truth_runs)?;
        rows.extend(gt.table.rows);
        samples.extend(gt.samples);
    }
    Ok(GroundTruth { table: GroundTruthTable::new(rows), samples })
}

/// Computes the ground truth and writes the summary and raw samples to the output directory.
pub fn cmd_ground_truth(config: &ExperimentConfig) -> Result<GroundTruth> {
    let gt = compute_ground_truth(config)?;
    write_csv(&config.output_dir.join(GROUND_TRUTH_FILE), gt.table.rows())?;
    write_csv(&config.output_dir.join(GROUND_TRUTH_SAMPLES_FILE), &gt.samples)?;
    Ok(gt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(r0: f64, i: usize, mean: Option<f64>) -> StrategySummary {
        StrategySummary { r0, strategy_index: i, n_runs: 10, n_established: 5, mean_outcome: mean, std_outcome: None }
    }

    #[test]
    fn best_arm_ignores_missing_means_and_takes_lowest_tie() {
        let t = GroundTruthTable::new(vec![
            row(1.4, 0, None),
            row(1.4, 2, Some(0.2)),
            row(1.4, 1, Some(0.2)),
            row(2.0, 0, Some(0.01)),
        ]);
        assert_eq!(t.best_arm(1.4), Some(1));
        assert_eq!(t.best_arm(2.0), Some(0));
        assert_eq!(t.best_arm(1.8), None);
    }

    #[test]
    fn one_row_per_strategy() {
        let config = ExperimentConfig { r0_list: vec![1.4, 2.0], ground_truth_runs: 3, ..Default::default() };
        let gt = compute_ground_truth(&config).unwrap();
        assert_eq!(gt.table.rows().len(), 64);
        assert_eq!(gt.samples.len(), 192);
        assert!(gt.table.rows().iter().all(|r| r.n_runs == 3 && r.n_established <= 3));
    }

    #[test]
    fn missing_file_is_reported() {
        let err = GroundTruthTable::read(Path::new("/nonexistent/ground_truth.csv"));
        assert!(matches!(err, Err(Error::MissingGroundTruth(_))));
    }
}
