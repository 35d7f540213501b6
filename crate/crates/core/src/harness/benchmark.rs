use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EnvironmentKind, ExperimentConfig};
use super::ground_truth::GroundTruthTable;
use super::seed::{stream, Domain};
use super::{write_csv, BENCHMARK_FILE, GROUND_TRUTH_FILE, SUCCESS_RATE_FILE};
use crate::bandit::{Algorithm, AlgorithmSettings, Environment};
use crate::error::{Error, Result};
use crate::sim::{
    enumerate_strategies, make_environment, make_synthetic_environment, CalibratedScenario, SyntheticEnvironment,
};

/// Floor for synthetic arm spreads when the ground truth has fewer than two
/// established runs.
const MIN_SYNTHETIC_SIGMA: f64 = 1e-4;

/// One seeded execution of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub r0: f64,
    pub budget: usize,
    pub replicate: usize,
    /// Empty when the run failed (budget below the algorithm's minimum, or no
    /// established sample).
    pub recommended_arm: Option<usize>,
    pub correct: bool,
    pub p_success: Option<f64>,
    /// Accepted pulls per arm as a JSON array.
    pub pulls_json: String,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRate {
    pub algorithm: Algorithm,
    pub r0: f64,
    pub budget: usize,
    pub replicates: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_p_success: Option<f64>,
}

/// Synthetic arms matching the ground-truth moments and establishment rates at `r0`.
pub fn synthetic_from_ground_truth(table: &GroundTruthTable, r0: f64) -> Result<SyntheticEnvironment> {
    let rows = table.at(r0);
    if rows.is_empty() {
        return Err(Error::InvalidParameter(format!("ground truth has no rows at r0 = {r0}")));
    }
    make_synthetic_environment(
        rows.iter().map(|r| r.mean_outcome.unwrap_or(1.0)).collect(),
        rows.iter().map(|r| r.std_outcome.unwrap_or(0.0).max(MIN_SYNTHETIC_SIGMA)).collect(),
        rows.iter().map(|r| r.establishment_rate()).collect(),
    )
}

fn algorithm_code(a: Algorithm) -> u64 {
    Algorithm::ALL.iter().position(|&x| x == a).expect("listed algorithm") as u64
}

/// Runs one replicate on its own stream.
#[allow(clippy::too_many_arguments)]
pub fn run_replicate<E: Environment + ?Sized>(
    env: &E,
    algorithm: Algorithm,
    settings: &AlgorithmSettings,
    master_seed: u64,
    r0: f64,
    budget: usize,
    replicate: usize,
    best_arm: usize,
    all_ps: bool,
    record_wall_time: bool,
) -> RunRecord {
    let mut rng = stream(
        master_seed,
        Domain::Benchmark,
        &[algorithm_code(algorithm), r0.to_bits(), budget as u64, replicate as u64],
    );
    let start = Instant::now();
    let outcome = algorithm.run(env, budget, settings, &mut rng);
    let wall_ms = if record_wall_time { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let (recommended_arm, p_success, pulls_json) = match outcome {
        Ok(rec) => {
            let rec = if all_ps { rec.with_probability_of_success() } else { rec };
            let pulls = serde_json::to_string(&rec.accepted_per_arm()).expect("integer list serializes");
            (Some(rec.arm), rec.probability_of_success, pulls)
        }
        Err(_) => (None, None, "[]".to_string()),
    };
    RunRecord {
        algorithm,
        r0,
        budget,
        replicate,
        recommended_arm,
        correct: recommended_arm == Some(best_arm),
        p_success,
        pulls_json,
        wall_ms,
    }
}

fn run_cells<E: Environment + Sync>(config: &ExperimentConfig, env: &E, r0: f64, best: usize) -> Vec<RunRecord> {
    let settings = config.algorithm_settings();
    let cells: Vec<(Algorithm, usize, usize)> = config
        .algorithms
        .iter()
        .flat_map(|&a| config.budgets.iter().flat_map(move |&b| (0..config.replicates).map(move |i| (a, b, i))))
        .collect();
    cells
        .par_iter()
        .map(|&(a, b, i)| {
            run_replicate(
                env,
                a,
                &settings,
                config.master_seed,
                r0,
                b,
                i,
                best,
                config.ps_all_algorithms,
                config.record_wall_time,
            )
        })
        .collect()
}

/// Runs every (algorithm, r0, budget, replicate) cell. Records come back in
/// config order: algorithm, then r0, then budget, then replicate.
pub fn run_benchmark(config: &ExperimentConfig, table: &GroundTruthTable) -> Result<Vec<RunRecord>> {
    let pool = config.thread_pool()?;
    let mut by_r0 = Vec::with_capacity(config.r0_list.len());
    for &r0 in &config.r0_list {
        let best = table
            .best_arm(r0)
            .ok_or_else(|| Error::MissingGroundTruth(config.output_dir.join(GROUND_TRUTH_FILE)))?;
        let records = match config.environment {
            EnvironmentKind::Surrogate => {
                let env = make_environment(CalibratedScenario::new(config.scenario_at(r0)?)?, enumerate_strategies())?;
                pool.install(|| run_cells(config, &env, r0, best))
            }
            EnvironmentKind::Synthetic => {
                let env = synthetic_from_ground_truth(table, r0)?;
                pool.install(|| run_cells(config, &env, r0, best))
            }
        };
        by_r0.push(records);
    }
    let order = |a: Algorithm| config.algorithms.iter().position(|&x| x == a);
    let r0_order = |r: f64| config.r0_list.iter().position(|&x| x == r);
    let mut records: Vec<RunRecord> = by_r0.into_iter().flatten().collect();
    records.sort_by_key(|r| (order(r.algorithm), r0_order(r.r0), r.budget, r.replicate));
    Ok(records)
}

/// Success rate per (algorithm, r0, budget) in config order.
pub fn success_rates(config: &ExperimentConfig, records: &[RunRecord]) -> Vec<SuccessRate> {
    let mut out = Vec::new();
    for &a in &config.algorithms {
        for &r0 in &config.r0_list {
            for &b in &config.budgets {
                let cell: Vec<&RunRecord> =
                    records.iter().filter(|r| r.algorithm == a && r.r0 == r0 && r.budget == b).collect();
                let successes = cell.iter().filter(|r| r.correct).count();
                let ps: Vec<f64> = cell.iter().filter_map(|r| r.p_success).collect();
                out.push(SuccessRate {
                    algorithm: a,
                    r0,
                    budget: b,
                    replicates: cell.len(),
                    successes,
                    success_rate: if cell.is_empty() { 0.0 } else { successes as f64 / cell.len() as f64 },
                    mean_p_success: (!ps.is_empty()).then(|| ps.iter().sum::<f64>() / ps.len() as f64),
                });
            }
        }
    }
    out
}

/// Reads the ground truth from the output directory, runs the benchmark and
/// writes per-run records and the success-rate table.
pub fn cmd_benchmark(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let table = GroundTruthTable::read(&config.output_dir.join(GROUND_TRUTH_FILE))?;
    let records = run_benchmark(config, &table)?;
    write_csv(&config.output_dir.join(BENCHMARK_FILE), &records)?;
    write_csv(&config.output_dir.join(SUCCESS_RATE_FILE), &success_rates(config, &records))?;
    Ok(records)
}
