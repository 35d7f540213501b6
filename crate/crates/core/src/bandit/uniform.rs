use rand::Rng;

use super::{run_single_arm, Algorithm, BudgetedRun, Environment, Recommendation};
use crate::error::{Error, Result};

/// Pulls an arm chosen uniformly at random at every step, then recommends the
/// best empirical mean.
pub fn run_uniform<E: Environment + ?Sized, R: Rng + ?Sized>(
    env: &E,
    budget: usize,
    rng: &mut R,
) -> Result<Recommendation> {
    let k = env.arm_count();
    if budget == 0 {
        return Err(Error::BudgetTooSmall { budget, arms: k, required: 0 });
    }
    if k == 1 {
        return run_single_arm(env, budget, Algorithm::Uniform, rng);
    }
    let mut run = BudgetedRun::new(budget, k);
    while run.remaining() > 0 {
        let arm = rng.random_range(0..k);
        run.pull(env, arm, rng);
    }
    let arm = run.best_empirical()?;
    Ok(Recommendation::new(arm, Algorithm::Uniform, run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::testenv::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_arm() {
        let env = UniformNoiseEnv { base: vec![0.4], shift: 0.0, half_width: 0.1, p_est: vec![1.0] };
        let rec = run_uniform(&env, 7, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(rec.arm, 0);
        assert_eq!(rec.pull_log().len(), 7);
    }

    #[test]
    fn budget_accounting() {
        let env = UniformNoiseEnv { base: vec![0.5; 32], shift: 0.0, half_width: 0.1, p_est: vec![1.0; 32] };
        let rec = run_uniform(&env, 32, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(rec.pull_log().len(), 32);
        assert!(run_uniform(&env, 0, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }

    #[test]
    fn nothing_established() {
        let env = UniformNoiseEnv { base: vec![0.5; 3], shift: 0.0, half_width: 0.1, p_est: vec![0.0; 3] };
        let err = run_uniform(&env, 20, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(matches!(err, Err(Error::NoEstablishedSample)));
    }
}
