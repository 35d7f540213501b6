//! BayesGap with confidence bounds built from the t posteriors:
//! `U_k = mean_k + beta * std_k`, `L_k = mean_k - beta * std_k`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_by, run_single_arm, Algorithm, BudgetedRun, Environment, Recommendation};
use crate::error::{Error, Result};
use crate::stats::TPosterior;

/// Accepted rewards per arm before the posterior standard deviation is finite.
pub const BAYESGAP_INIT_PULLS: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayesGapConfig {
    /// Hardness slack, in reward units.
    pub epsilon: f64,
    pub init_pulls: u64,
    /// Re-estimate hardness (and beta) from the current posteriors at every step.
    /// When false, the estimate made right after initialization is kept.
    pub beta_recompute: bool,
}

impl Default for BayesGapConfig {
    fn default() -> Self {
        BayesGapConfig { epsilon: 0.001, init_pulls: BAYESGAP_INIT_PULLS, beta_recompute: true }
    }
}

/// One decision of the algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStep {
    /// Pulls consumed when the decision was made.
    pub t: usize,
    pub beta: f64,
    /// `B_k(t)` for every arm.
    pub gaps: Vec<f64>,
    /// `J(t)`, the arm minimizing the gap.
    pub leader: usize,
    /// `j(t)`, the arm other than `J(t)` with the largest upper bound.
    pub challenger: usize,
    /// Arm pulled at this step, `None` for the final evaluation once the budget is spent.
    pub pulled: Option<usize>,
}

impl GapStep {
    pub fn leader_gap(&self) -> f64 {
        self.gaps[self.leader]
    }
}

pub fn bayesgap_bounds(post: &TPosterior, beta: f64) -> Result<(f64, f64)> {
    let std = post
        .std_dev()
        .ok_or_else(|| Error::InvalidParameter(format!("bounds need df > 2, got {}", post.df())))?;
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be nonnegative, got {beta}")));
    }
    Ok((post.mean() + beta * std, post.mean() - beta * std))
}

/// Upper-bound estimate of the problem hardness `H_eps = sum_k H_{k,eps}^-2` from
/// three-sigma posterior gaps.
pub fn estimate_hardness(posteriors: &[TPosterior], epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    if posteriors.len() < 2 {
        return Err(Error::InvalidParameter("hardness needs at least two arms".into()));
    }
    let moments = posteriors
        .iter()
        .map(|p| {
            p.std_dev()
                .map(|s| (p.mean(), s))
                .ok_or_else(|| Error::InvalidParameter(format!("hardness needs df > 2, got {}", p.df())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for (k, &(mean_k, std_k)) in moments.iter().enumerate() {
        let best_other = moments
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, &(m, s))| m + 3.0 * s)
            .fold(f64::NEG_INFINITY, f64::max);
        let delta = best_other - (mean_k - 3.0 * std_k);
        let h = (0.5 * (delta + epsilon)).max(epsilon);
        if h <= 0.0 {
            return Err(Error::ZeroHardness);
        }
        total += h.powi(-2);
    }
    Ok(total)
}

pub fn exploration_coefficient(budget: usize, arms: usize, hardness: f64, sigma_g_sq: f64) -> Result<f64> {
    if budget <= 3 * arms {
        return Err(Error::BudgetTooSmall { budget, arms, required: 3 * arms });
    }
    if !(hardness > 0.0) || !(sigma_g_sq > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hardness and variance must be positive, got {hardness} and {sigma_g_sq}"
        )));
    }
    Ok(((budget - 3 * arms) as f64 / (4.0 * hardness * sigma_g_sq)).sqrt())
}

pub fn run_bayesgap<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    config: &BayesGapConfig,
    rng: &mut R,
) -> Result<Recommendation> {
    let k = env.arm_count();
    if budget <= 3 * k {
        return Err(Error::BudgetTooSmall { budget, arms: k, required: 3 * k });
    }
    if k == 1 {
        return run_single_arm(env, budget, Algorithm::BayesGap, rng);
    }

    let mut run = BudgetedRun::new(budget, k);
    run.initialize(env, config.init_pulls.max(BAYESGAP_INIT_PULLS), rng)?;
    let sigma_g_sq = run.per_arm().iter().filter_map(|s| s.sample_variance()).sum::<f64>() / k as f64;

    let mut posteriors = (0..k).map(|a| run.posterior(a)).collect::<Result<Vec<_>>>()?;
    let mut frozen_hardness = None;
    let mut trace = Vec::with_capacity(run.remaining() + 1);
    loop {
        let hardness = match frozen_hardness {
            Some(h) => h,
            None => {
                let h = estimate_hardness(&posteriors, config.epsilon)?;
                if !config.beta_recompute {
                    frozen_hardness = Some(h);
                }
                h
            }
        };
        let beta = exploration_coefficient(budget, k, hardness, sigma_g_sq)?;
        let bounds = posteriors.iter().map(|p| bayesgap_bounds(p, beta)).collect::<Result<Vec<_>>>()?;

        let gaps: Vec<f64> = (0..k)
            .map(|a| {
                let top_other = bounds
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != a)
                    .map(|(_, b)| b.0)
                    .fold(f64::NEG_INFINITY, f64::max);
                top_other - bounds[a].1
            })
            .collect();
        let leader = argmax_by(gaps.iter().map(|g| Some(-g))).expect("at least two arms");
        let challenger = argmax_by(bounds.iter().enumerate().map(|(a, b)| (a != leader).then_some(b.0)))
            .expect("at least two arms");

        let diameter = |a: usize| bounds[a].0 - bounds[a].1;
        let pick = if diameter(challenger) > diameter(leader)
            || (diameter(challenger) == diameter(leader) && challenger < leader)
        {
            challenger
        } else {
            leader
        };

        let pulled = (run.remaining() > 0).then_some(pick);
        trace.push(GapStep { t: run.pulls_used(), beta, gaps, leader, challenger, pulled });
        let Some(arm) = pulled else { break };
        let before = run.per_arm()[arm].count;
        run.pull(env, arm, rng);
        if run.per_arm()[arm].count > before {
            posteriors[arm] = run.posterior(arm)?;
        }
    }

    // first time the leader's gap reached its minimum
    let best_step = trace
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (i, s)| match best {
            Some((_, g)) if s.leader_gap() >= g => best,
            _ => Some((i, s.leader_gap())),
        })
        .map(|(i, _)| i)
        .expect("trace holds the final evaluation");
    let arm = trace[best_step].leader;
    let mut rec = Recommendation::new(arm, Algorithm::BayesGap, run);
    rec.diagnostics.gap_trace = trace;
    Ok(rec)
}
