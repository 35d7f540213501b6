use rand::Rng;

use super::{run_single_arm, Algorithm, BudgetedRun, Environment, Recommendation};
use crate::error::{Error, Result};

/// Cumulative per-arm pull targets `n_1..n_{K-1}`, with
/// `n_k = ceil((T - K) / (logbar(K) * (K + 1 - k)))` and
/// `logbar(K) = 1/2 + sum_{i=2}^K 1/i`.
pub fn successive_rejects_schedule(budget: usize, arms: usize) -> Vec<usize> {
    if arms < 2 {
        return Vec::new();
    }
    let log_bar = 0.5 + (2..=arms).map(|i| 1.0 / i as f64).sum::<f64>();
    let spare = budget.saturating_sub(arms) as f64;
    (1..arms)
        .map(|k| {
            let target = spare / (log_bar * (arms + 1 - k) as f64);
            // absorb float noise before the ceiling
            (target - 1e-9).ceil().max(0.0) as usize
        })
        .collect()
}

/// Runs `K - 1` elimination phases and recommends the last surviving arm.
/// Budget the schedule leaves over is shared by the final two survivors.
pub fn run_successive_rejects<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    rng: &mut R,
) -> Result<Recommendation> {
    let k = env.arm_count();
    if budget < k || budget == 0 {
        return Err(Error::BudgetTooSmall { budget, arms: k, required: k.saturating_sub(1) });
    }
    if k == 1 {
        return run_single_arm(env, budget, Algorithm::SuccessiveRejects, rng);
    }

    let schedule = successive_rejects_schedule(budget, k);
    let mut run = BudgetedRun::new(budget, k);
    let mut survivors: Vec<usize> = (0..k).collect();
    let mut history = Vec::with_capacity(k - 1);
    let mut previous = 0;

    for &target in &schedule {
        let extra = target.saturating_sub(previous).max(usize::from(previous == 0));
        for &arm in &survivors {
            for _ in 0..extra {
                run.pull(env, arm, rng);
            }
        }
        previous = previous.max(target).max(1);
        if survivors.len() == 2 {
            // the schedule rounds down overall; the final pair takes what is left
            'spend: loop {
                for &arm in &survivors {
                    if run.pull(env, arm, rng).is_none() {
                        break 'spend;
                    }
                }
            }
        }

        // lowest mean is rejected; arms without data rank lowest, ties drop the highest index
        let stats = run.per_arm();
        let (pos, _) = survivors
            .iter()
            .enumerate()
            .map(|(pos, &arm)| {
                let s = stats[arm];
                (pos, if s.count > 0 { s.mean } else { f64::NEG_INFINITY })
            })
            .fold((usize::MAX, f64::INFINITY), |best, (pos, v)| if v <= best.1 { (pos, v) } else { best });
        survivors.remove(pos);
        history.push(survivors.clone());
    }

    let arm = survivors[0];
    if run.per_arm()[arm].count == 0 {
        return Err(Error::NoEstablishedSample);
    }
    let mut rec = Recommendation::new(arm, Algorithm::SuccessiveRejects, run);
    rec.diagnostics.survivors = history;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::testenv::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn four_arm_schedule() {
        assert_eq!(successive_rejects_schedule(100, 4), vec![16, 21, 31]);
    }

    #[test]
    fn two_arms_split_evenly() {
        assert_eq!(successive_rejects_schedule(8, 2), vec![3]);
        let env = two_arm([0.5, 0.2]);
        let rec = run_successive_rejects(&env, 8, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(rec.diagnostics.run.pulls_per_arm(), vec![4, 4]);
        assert_eq!(rec.arm, 1);
    }

    #[test]
    fn schedule_fits_budget() {
        for k in 2..40 {
            for t in k..600 {
                let s = successive_rejects_schedule(t, k);
                let used: usize = s.iter().sum::<usize>() + s.last().copied().unwrap_or(0);
                assert!(used.max(k) <= t, "K={k} T={t} uses {used}");
            }
        }
    }

    #[test]
    fn phase_accounting() {
        let env = UniformNoiseEnv {
            base: (0..8).map(|i| 0.1 + 0.05 * i as f64).collect(),
            shift: 0.0,
            half_width: 0.02,
            p_est: vec![1.0; 8],
        };
        let rec = run_successive_rejects(&env, 80, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        for (j, s) in rec.diagnostics.survivors.iter().enumerate() {
            assert_eq!(s.len(), 8 - (j + 1));
        }
        assert_eq!(rec.pull_log().len(), 80);
        assert_eq!(rec.arm, 0);
    }

    #[test]
    fn budget_below_arm_count() {
        let env = two_arm([0.5, 0.2]);
        assert!(matches!(
            run_successive_rejects(&env, 1, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::BudgetTooSmall { .. })
        ));
    }
}
