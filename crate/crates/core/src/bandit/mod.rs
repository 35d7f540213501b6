//! Fixed-budget best-arm identification over a censored-reward environment.
//!
//! Every pull costs one unit of budget. Outcomes of simulations that never
//! established are logged but do not update the arm's statistics. Rewards are
//! the negated outcome, so the best arm minimizes the expected outcome.

mod bayesgap;
mod successive_rejects;
mod ttts;
mod uniform;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bayesgap::{bayesgap_bounds, estimate_hardness, exploration_coefficient, run_bayesgap, BayesGapConfig, GapStep};
pub use successive_rejects::{run_successive_rejects, successive_rejects_schedule};
pub use ttts::{run_ttts, run_ttts_with, TttsConfig, TTTS_REDRAW_LIMIT};
pub use uniform::run_uniform;

use crate::confidence::{probability_of_success, PosteriorSet};
use crate::error::{Error, Result};
use crate::stats::{ArmStatistics, TPosterior};

/// Result of one stochastic evaluation of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawOutcome {
    /// Proportion of the population with a symptomatic infection.
    pub outcome: f64,
    /// Whether the simulated epidemic reached the fade-out threshold.
    pub established: bool,
}

/// A stochastic simulator viewed as a multi-armed bandit.
///
/// `pull` must depend only on `arm` and the state of `rng`.
pub trait Environment {
    fn arm_count(&self) -> usize;

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome;
}

impl<E: Environment + ?Sized> Environment for &E {
    fn arm_count(&self) -> usize {
        (**self).arm_count()
    }

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome {
        (**self).pull(arm, rng)
    }
}

pub fn reward_of(outcome: &RawOutcome) -> Result<f64> {
    if outcome.established {
        Ok(-outcome.outcome)
    } else {
        Err(Error::CensoredOutcome)
    }
}

/// Pulls `arm` once and folds the reward into `stats` if the outcome is established.
pub fn censored_pull<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    arm: usize,
    stats: ArmStatistics,
    rng: &mut R,
) -> (ArmStatistics, RawOutcome) {
    let outcome = env.pull(arm, rng);
    let stats = match reward_of(&outcome) {
        Ok(r) => stats.update(r),
        Err(_) => stats,
    };
    (stats, outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullRecord {
    pub arm: usize,
    pub outcome: f64,
    pub established: bool,
    pub accepted: bool,
}

/// Budget bookkeeping shared by all algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetedRun {
    budget: usize,
    per_arm: Vec<ArmStatistics>,
    pull_log: Vec<PullRecord>,
}

impl BudgetedRun {
    pub fn new(budget: usize, arms: usize) -> BudgetedRun {
        BudgetedRun { budget, per_arm: vec![ArmStatistics::EMPTY; arms], pull_log: Vec::with_capacity(budget) }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn pulls_used(&self) -> usize {
        self.pull_log.len()
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.pull_log.len()
    }

    pub fn per_arm(&self) -> &[ArmStatistics] {
        &self.per_arm
    }

    pub fn pull_log(&self) -> &[PullRecord] {
        &self.pull_log
    }

    /// One censored pull; `None` once the budget is spent.
    pub fn pull<E: Environment + ?Sized, R: Rng + ?Sized>(
        &mut self,
        env: &E,
        arm: usize,
        rng: &mut R,
    ) -> Option<RawOutcome> {
        if self.remaining() == 0 {
            return None;
        }
        let before = self.per_arm[arm];
        let (after, outcome) = censored_pull(env, arm, before, rng);
        self.per_arm[arm] = after;
        self.pull_log.push(PullRecord {
            arm,
            outcome: outcome.outcome,
            established: outcome.established,
            accepted: after.count > before.count,
        });
        Some(outcome)
    }

    /// Pulls each arm in turn until it holds `accepted` established rewards.
    pub fn initialize<E: Environment + ?Sized, R: Rng + ?Sized>(
        &mut self,
        env: &E,
        accepted: u64,
        rng: &mut R,
    ) -> Result<()> {
        for arm in 0..self.per_arm.len() {
            while self.per_arm[arm].count < accepted {
                if self.pull(env, arm, rng).is_none() {
                    return Err(Error::NoEstablishedSample);
                }
            }
        }
        Ok(())
    }

    /// Total pulls (accepted or censored) per arm.
    pub fn pulls_per_arm(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.per_arm.len()];
        for p in &self.pull_log {
            counts[p.arm] += 1;
        }
        counts
    }

    pub fn accepted_per_arm(&self) -> Vec<u64> {
        self.per_arm.iter().map(|s| s.count).collect()
    }

    /// Arm with the highest empirical mean reward among arms with data.
    pub fn best_empirical(&self) -> Result<usize> {
        argmax_by(self.per_arm.iter().map(|s| (s.count > 0).then_some(s.mean))).ok_or(Error::NoEstablishedSample)
    }

    pub fn posteriors(&self) -> Vec<Option<TPosterior>> {
        self.per_arm.iter().map(|s| s.posterior().ok()).collect()
    }

    pub fn posterior(&self, arm: usize) -> Result<TPosterior> {
        self.per_arm[arm].posterior()
    }
}

/// Index of the largest present value; ties go to the lowest index.
pub(crate) fn argmax_by<I: IntoIterator<Item = Option<f64>>>(values: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Uniform,
    #[serde(rename = "sr")]
    SuccessiveRejects,
    #[serde(rename = "bayesgap")]
    BayesGap,
    Ttts,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::Uniform, Algorithm::SuccessiveRejects, Algorithm::BayesGap, Algorithm::Ttts];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Uniform => "uniform",
            Algorithm::SuccessiveRejects => "sr",
            Algorithm::BayesGap => "bayesgap",
            Algorithm::Ttts => "ttts",
        }
    }

    /// Smallest budget the algorithm accepts for `arms` arms.
    pub fn min_budget(self, arms: usize) -> usize {
        match self {
            Algorithm::Uniform => 1,
            Algorithm::SuccessiveRejects => arms,
            Algorithm::BayesGap => 3 * arms + 1,
            Algorithm::Ttts => 2 * arms + 1,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "uniform" => Ok(Algorithm::Uniform),
            "sr" | "successive_rejects" => Ok(Algorithm::SuccessiveRejects),
            "bayesgap" => Ok(Algorithm::BayesGap),
            "ttts" => Ok(Algorithm::Ttts),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Per-run parameters for every algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgorithmSettings {
    pub ttts: TttsConfig,
    pub bayesgap: BayesGapConfig,
}

impl Algorithm {
    pub fn run<E: Environment + ?Sized, R: Rng + ?Sized>(
        self,
        env: &E,
        budget: usize,
        settings: &AlgorithmSettings,
        rng: &mut R,
    ) -> Result<Recommendation> {
        match self {
            Algorithm::Uniform => run_uniform(env, budget, rng),
            Algorithm::SuccessiveRejects => run_successive_rejects(env, budget, rng),
            Algorithm::BayesGap => run_bayesgap(env, budget, &settings.bayesgap, rng),
            Algorithm::Ttts => run_ttts_with(env, budget, &settings.ttts, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub run: BudgetedRun,
    /// Final posterior per arm; `None` where the arm has too few distinct rewards.
    pub posteriors: Vec<Option<TPosterior>>,
    /// Per-step gap record (BayesGap only).
    pub gap_trace: Vec<GapStep>,
    /// Surviving arms after each phase (Successive Rejects only).
    pub survivors: Vec<Vec<usize>>,
    /// Steps where the top-two redraw hit its cap and the runner-up was pulled.
    pub redraw_fallbacks: usize,
}

impl Diagnostics {
    fn from_run(run: BudgetedRun) -> Diagnostics {
        let posteriors = run.posteriors();
        Diagnostics { run, posteriors, gap_trace: Vec::new(), survivors: Vec::new(), redraw_fallbacks: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub arm: usize,
    pub algorithm: Algorithm,
    pub probability_of_success: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl Recommendation {
    fn new(arm: usize, algorithm: Algorithm, run: BudgetedRun) -> Recommendation {
        Recommendation { arm, algorithm, probability_of_success: None, diagnostics: Diagnostics::from_run(run) }
    }

    pub fn pull_log(&self) -> &[PullRecord] {
        self.diagnostics.run.pull_log()
    }

    pub fn accepted_per_arm(&self) -> Vec<u64> {
        self.diagnostics.run.accepted_per_arm()
    }

    /// Probability of success from the final posteriors, when every arm has one.
    pub fn posterior_success_probability(&self) -> Option<f64> {
        let posts: Option<Vec<TPosterior>> = self.diagnostics.posteriors.iter().copied().collect();
        let set = PosteriorSet::new(posts?, self.arm).ok()?;
        Some(probability_of_success(&set))
    }

    /// Fills `probability_of_success` if it is not yet set and can be computed.
    #[must_use]
    pub fn with_probability_of_success(mut self) -> Recommendation {
        if self.probability_of_success.is_none() {
            self.probability_of_success = self.posterior_success_probability();
        }
        self
    }
}

/// Spends the whole budget on the only arm.
fn run_single_arm<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    algorithm: Algorithm,
    rng: &mut R,
) -> Result<Recommendation> {
    let mut run = BudgetedRun::new(budget, 1);
    while run.pull(env, 0, rng).is_some() {}
    let arm = run.best_empirical()?;
    Ok(Recommendation::new(arm, algorithm, run))
}


#[cfg(test)]
mod tests {
    use super::testenv::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reward_orientation() {
        assert_eq!(reward_of(&RawOutcome { outcome: 0.25, established: true }).unwrap(), -0.25);
        assert_eq!(reward_of(&RawOutcome { outcome: 0.0, established: true }).unwrap(), 0.0);
        assert!(matches!(reward_of(&RawOutcome { outcome: 0.01, established: false }), Err(Error::CensoredOutcome)));
    }

    #[test]
    fn censored_pulls_do_not_update() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut env = two_arm([0.3, 0.5]);
        env.half_width = 0.0;
        let (s, o) = censored_pull(&env, 0, ArmStatistics::EMPTY, &mut rng);
        assert_eq!(o.outcome, 0.3);
        assert_eq!(s.mean, -0.3);

        env.p_est = vec![0.0, 0.0];
        let mut run = BudgetedRun::new(3, 2);
        run.pull(&env, 1, &mut rng).unwrap();
        assert_eq!(run.pulls_used(), 1);
        assert_eq!(run.per_arm()[1], ArmStatistics::EMPTY);
        assert!(!run.pull_log()[0].accepted);
    }

    #[test]
    fn accepted_counts_match_pulls_when_always_established() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let env = two_arm([0.3, 0.5]);
        let mut run = BudgetedRun::new(10, 2);
        for i in 0..10 {
            run.pull(&env, i % 2, &mut rng).unwrap();
        }
        assert!(run.pull(&env, 0, &mut rng).is_none());
        assert_eq!(run.accepted_per_arm(), run.pulls_per_arm());
    }

    #[test]
    fn argmax_ties_lowest_index() {
        assert_eq!(argmax_by([Some(1.0), Some(2.0), Some(2.0)]), Some(1));
        assert_eq!(argmax_by([None, Some(-1.0)]), Some(1));
        assert_eq!(argmax_by([None::<f64>, None]), None);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("ucb1".parse::<Algorithm>().is_err());
    }
}
