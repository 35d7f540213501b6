use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bandit::{Algorithm, AlgorithmSettings, BayesGapConfig, TttsConfig};
use crate::error::{Error, Result};
use crate::sim::Scenario;

/// Arms a benchmark runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvironmentKind {
    /// The stochastic epidemic itself, one arm per vaccine strategy.
    Surrogate,
    /// Truncated Gaussian arms whose moments and establishment rates come from
    /// the ground-truth table.
    Synthetic,
}

/// Experiment settings. In a config file these keys sit next to the scenario
/// keys in one flat TOML table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    #[serde(skip)]
    pub scenario: Scenario,
    /// Optional TOML file with scenario keys; keys in the experiment file win.
    pub scenario_file: Option<PathBuf>,
    pub r0_list: Vec<f64>,
    pub budgets: Vec<usize>,
    pub replicates: usize,
    pub algorithms: Vec<Algorithm>,
    pub omega: f64,
    pub epsilon: f64,
    pub dispersion: f64,
    pub cutoff: f64,
    pub controlled_fraction: f64,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    /// Evaluations per strategy and r0 when building the ground truth.
    pub ground_truth_runs: usize,
    pub environment: EnvironmentKind,
    /// Compute the probability of success for every algorithm, not only TTTS.
    pub ps_all_algorithms: bool,
    /// Write measured wall time; off by default so reruns are byte-identical.
    pub record_wall_time: bool,
    /// Worker threads; `None` uses one per core.
    pub workers: Option<usize>,
}

pub const DESK_GROUND_TRUTH_RUNS: usize = 200;
pub const PAPER_GROUND_TRUTH_RUNS: usize = 1000;

pub fn default_budgets() -> Vec<usize> {
    let mut b: Vec<usize> = (32..=480).step_by(32).collect();
    b.push(500);
    b
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::default(),
            scenario_file: None,
            r0_list: vec![1.4, 1.6, 1.8, 2.0, 2.2, 2.4],
            budgets: default_budgets(),
            replicates: 100,
            algorithms: Algorithm::ALL.to_vec(),
            omega: 0.5,
            epsilon: 0.001,
            dispersion: 0.5,
            cutoff: 1e-10,
            controlled_fraction: 0.0,
            master_seed: 0,
            output_dir: PathBuf::from("results"),
            ground_truth_runs: DESK_GROUND_TRUTH_RUNS,
            environment: EnvironmentKind::Surrogate,
            ps_all_algorithms: false,
            record_wall_time: false,
            workers: None,
        }
    }
}

const EXPERIMENT_KEYS: &[&str] = &[
    "scenario_file",
    "r0_list",
    "budgets",
    "replicates",
    "algorithms",
    "omega",
    "epsilon",
    "dispersion",
    "cutoff",
    "controlled_fraction",
    "master_seed",
    "output_dir",
    "ground_truth_runs",
    "environment",
    "ps_all_algorithms",
    "record_wall_time",
    "workers",
];

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

fn read_table(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl ExperimentConfig {
    /// Parses a flat TOML document. Relative `scenario_file` paths resolve
    /// against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
        let table: toml::Table = text.parse().map_err(config_err)?;
        let (experiment, scenario_keys): (toml::Table, toml::Table) =
            table.into_iter().partition(|(k, _)| EXPERIMENT_KEYS.contains(&k.as_str()));
        let mut config: ExperimentConfig = experiment.try_into().map_err(config_err)?;

        let mut merged = match &config.scenario_file {
            Some(file) => read_table(&base_dir.join(file))?,
            None => toml::Table::new(),
        };
        merged.extend(scenario_keys);
        config.scenario = merged.try_into().map_err(config_err)?;
        config.scenario.validate()?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        ExperimentConfig::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.r0_list.is_empty() || self.r0_list.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return fail(format!("r0_list must hold positive values, got {:?}", self.r0_list));
        }
        if self.budgets.is_empty() || self.budgets.windows(2).any(|w| w[0] >= w[1]) || self.budgets[0] == 0 {
            return fail(format!("budgets must be nonempty, positive and strictly ascending, got {:?}", self.budgets));
        }
        if self.replicates == 0 {
            return fail("replicates must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return fail("algorithms must not be empty".into());
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return fail(format!("omega must lie in (0, 1], got {}", self.omega));
        }
        if !(self.epsilon > 0.0) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.dispersion > 0.0 && self.dispersion.is_finite()) {
            return fail(format!("dispersion must be positive, got {}", self.dispersion));
        }
        if !(self.cutoff > 0.0 && self.cutoff < 1.0) {
            return fail(format!("cutoff must lie in (0, 1), got {}", self.cutoff));
        }
        if !(0.0..=1.0).contains(&self.controlled_fraction) {
            return fail(format!("controlled_fraction must lie in [0, 1], got {}", self.controlled_fraction));
        }
        if self.ground_truth_runs == 0 {
            return fail("ground_truth_runs must be at least 1".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn algorithm_settings(&self) -> AlgorithmSettings {
        AlgorithmSettings {
            ttts: TttsConfig { omega: self.omega, ..TttsConfig::default() },
            bayesgap: BayesGapConfig { epsilon: self.epsilon, ..BayesGapConfig::default() },
        }
    }

    /// Scenario at `r0` with the establishment threshold of the configured
    /// offspring model.
    pub fn scenario_at(&self, r0: f64) -> Result<Scenario> {
        self.scenario.with_r0(r0, self.dispersion, self.controlled_fraction, self.cutoff)
    }

    pub(crate) fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
    }
}
