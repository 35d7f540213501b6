use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_by, run_single_arm, Algorithm, BudgetedRun, Environment, Recommendation};
use crate::error::{Error, Result};
use crate::stats::TPosterior;

/// Joint posterior redraws allowed per step while looking for a challenger.
pub const TTTS_REDRAW_LIMIT: usize = 10_000;

const TTTS_INIT_PULLS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TttsConfig {
    /// Probability of pulling the leader of a posterior draw.
    pub omega: f64,
    pub redraw_limit: usize,
    /// Fail with `ResampleLimit` when no challenger appears within `redraw_limit`
    /// draws. Otherwise the runner-up of the last draw is pulled.
    pub strict: bool,
}

impl Default for TttsConfig {
    fn default() -> Self {
        TttsConfig { omega: 0.5, redraw_limit: TTTS_REDRAW_LIMIT, strict: false }
    }
}

/// Leader and runner-up of one joint posterior draw.
fn thompson_draw<R: Rng + ?Sized>(posteriors: &[TPosterior], rng: &mut R) -> (usize, usize) {
    let samples: Vec<f64> = posteriors.iter().map(|p| p.sample(rng)).collect();
    let top = argmax_by(samples.iter().map(|&x| Some(x))).expect("nonempty posterior list");
    let second = argmax_by(samples.iter().enumerate().map(|(i, &x)| (i != top).then_some(x)))
        .expect("at least two arms");
    (top, second)
}

/// Top-two Thompson sampling. The leader of a joint posterior draw is pulled
/// with probability `omega`; otherwise posteriors are redrawn until a different
/// arm leads, and that arm is pulled.
pub fn run_ttts<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    omega: f64,
    rng: &mut R,
) -> Result<Recommendation> {
    run_ttts_with(env, budget, &TttsConfig { omega, ..TttsConfig::default() }, rng)
}

pub fn run_ttts_with<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    config: &TttsConfig,
    rng: &mut R,
) -> Result<Recommendation> {
    let k = env.arm_count();
    let omega = config.omega;
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::InvalidParameter(format!("omega must lie in (0, 1], got {omega}")));
    }
    if budget <= 2 * k {
        return Err(Error::BudgetTooSmall { budget, arms: k, required: 2 * k });
    }
    if k == 1 {
        return run_single_arm(env, budget, Algorithm::Ttts, rng);
    }

    let mut run = BudgetedRun::new(budget, k);
    run.initialize(env, TTTS_INIT_PULLS, rng)?;
    let mut posteriors = (0..k).map(|a| run.posterior(a)).collect::<Result<Vec<_>>>()?;
    let mut fallbacks = 0;

    while run.remaining() > 0 {
        let (top, _) = thompson_draw(&posteriors, rng);
        let arm = if rng.random::<f64>() < omega {
            top
        } else {
            let mut challenger = None;
            let mut runner_up = top;
            for _ in 0..config.redraw_limit {
                let (candidate, second) = thompson_draw(&posteriors, rng);
                if candidate != top {
                    challenger = Some(candidate);
                    break;
                }
                runner_up = second;
            }
            match challenger {
                Some(c) => c,
                None if config.strict => return Err(Error::ResampleLimit(config.redraw_limit)),
                None => {
                    fallbacks += 1;
                    runner_up
                }
            }
        };
        let before = run.per_arm()[arm].count;
        run.pull(env, arm, rng);
        if run.per_arm()[arm].count > before {
            posteriors[arm] = run.posterior(arm)?;
        }
    }

    let arm = run.best_empirical()?;
    let mut rec = Recommendation::new(arm, Algorithm::Ttts, run).with_probability_of_success();
    rec.diagnostics.redraw_fallbacks = fallbacks;
    Ok(rec)
}
