use epibandit::bandit::{
    run_successive_rejects, run_ttts, run_uniform, Algorithm, AlgorithmSettings, Environment, RawOutcome,
};
use epibandit::sim::{
    enumerate_strategies, make_synthetic_environment, simulate, CalibratedScenario, Scenario, SyntheticEnvironment,
    VaccineStrategy,
};
use epibandit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn wins<E: Environment>(env: &E, alg: Algorithm, budget: usize, best: usize, reps: u64) -> usize {
    (0..reps)
        .filter(|&s| alg.run(env, budget, &AlgorithmSettings::default(), &mut rng(1000 + s)).is_ok_and(|r| r.arm == best))
        .count()
}

fn two_arm(a: f64, b: f64, sigma: f64) -> SyntheticEnvironment {
    make_synthetic_environment(vec![a, b], vec![sigma; 2], vec![1.0; 2]).unwrap()
}

/// Arm 0 always beats arm 1: outcomes in disjoint ranges.
struct Dominance;

impl Environment for Dominance {
    fn arm_count(&self) -> usize {
        2
    }

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome {
        let base = if arm == 0 { 0.1 } else { 0.6 };
        RawOutcome { outcome: base + rng.random_range(0.0..0.2), established: true }
    }
}

#[test]
fn single_arm_always_recommended() {
    let env = make_synthetic_environment(vec![0.3], vec![0.05], vec![1.0]).unwrap();
    for alg in Algorithm::ALL {
        let rec = alg.run(&env, 20, &AlgorithmSettings::default(), &mut rng(0)).unwrap();
        assert_eq!(rec.arm, 0, "{alg}");
    }
}

#[test]
fn uniform_separated_arms() {
    let env = two_arm(0.1, 0.5, 0.05);
    assert!(wins(&env, Algorithm::Uniform, 500, 0, 100) >= 99);
    let many = make_synthetic_environment(vec![0.3; 32], vec![0.05; 32], vec![1.0; 32]).unwrap();
    assert_eq!(run_uniform(&many, 32, &mut rng(1)).unwrap().pull_log().len(), 32);
}

#[test]
fn successive_rejects_keeps_dominant_arm() {
    for seed in 0..100 {
        let rec = run_successive_rejects(&Dominance, 40, &mut rng(seed)).unwrap();
        assert!(rec.diagnostics.survivors.iter().all(|s| s.contains(&0)));
        assert_eq!(rec.arm, 0);
    }
}

#[test]
fn bayesgap_separated_arms() {
    assert!(wins(&two_arm(0.1, 0.5, 0.05), Algorithm::BayesGap, 100, 0, 100) >= 95);
}

#[test]
fn ttts_separated_arms() {
    let env = two_arm(0.1, 0.5, 0.05);
    let ok = (0..100).filter(|&s| run_ttts(&env, 64, 0.5, &mut rng(s)).unwrap().arm == 0).count();
    assert!(ok >= 95);
}

#[test]
fn dominance_at_four_k() {
    for alg in Algorithm::ALL {
        let budget = (4 * 2).max(alg.min_budget(2));
        for seed in 0..20 {
            let rec = alg.run(&Dominance, budget, &AlgorithmSettings::default(), &mut rng(seed)).unwrap();
            assert_eq!(rec.pull_log().len(), budget);
            if alg != Algorithm::Uniform {
                assert_eq!(rec.arm, 0, "{alg} seed {seed}");
            }
        }
    }
}

#[test]
fn near_deterministic_arms_recovered() {
    let means = vec![0.30, 0.22, 0.41, 0.25, 0.35];
    let env = make_synthetic_environment(means, vec![1e-4; 5], vec![1.0; 5]).unwrap();
    for alg in Algorithm::ALL {
        assert_eq!(wins(&env, alg, 60, env.best_arm(), 20), 20, "{alg}");
    }
}

#[test]
fn nothing_established() {
    let env = make_synthetic_environment(vec![0.2, 0.3], vec![0.05; 2], vec![0.0; 2]).unwrap();
    for alg in Algorithm::ALL {
        let err = alg.run(&env, 40, &AlgorithmSettings::default(), &mut rng(0)).unwrap_err();
        assert!(matches!(err, Error::NoEstablishedSample), "{alg}: {err}");
    }
}

#[test]
fn ttts_beats_uniform_at_equal_budget() {
    let env = two_arm(0.2, 0.25, 0.02);
    assert_eq!(env.best_arm(), 0);
    let ttts = wins(&env, Algorithm::Ttts, 200, 0, 100);
    let uniform = wins(&env, Algorithm::Uniform, 200, 0, 100);
    assert!(ttts >= uniform, "ttts {ttts} uniform {uniform}");
}

/// Largest deviation of `ys` from its nondecreasing least-squares fit.
fn isotonic_residual(ys: &[f64]) -> f64 {
    let mut blocks: Vec<(f64, usize)> = Vec::new();
    for &y in ys {
        blocks.push((y, 1));
        while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
            let (b, nb) = blocks.pop().unwrap();
            let (a, na) = blocks.pop().unwrap();
            blocks.push(((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb));
        }
    }
    let fit: Vec<f64> = blocks.iter().flat_map(|&(v, n)| std::iter::repeat_n(v, n)).collect();
    ys.iter().zip(&fit).map(|(y, f)| (y - f).abs()).fold(0.0, f64::max)
}

#[test]
fn success_rate_trends_upward_in_budget() {
    let means: Vec<f64> = (0..8).map(|i| 0.20 + 0.01 * i as f64).collect();
    let env = make_synthetic_environment(means, vec![0.03; 8], vec![0.9; 8]).unwrap();
    for alg in Algorithm::ALL {
        let rates: Vec<f64> =
            [40, 80, 120, 160, 240].iter().map(|&b| wins(&env, alg, b, 0, 100) as f64 / 100.0).collect();
        // three binomial standard errors at 100 replicates
        assert!(isotonic_residual(&rates) <= 0.15, "{alg}: {rates:?}");
        assert!(rates[4] > rates[0], "{alg}: {rates:?}");
    }
}

#[test]
fn vaccinating_everyone_lowers_attack_rate() {
    let calibrated = CalibratedScenario::new(Scenario::default().with_r0(1.8, 0.5, 0.0, 1e-10).unwrap()).unwrap();
    let none = VaccineStrategy::from_index(0).unwrap();
    let all = VaccineStrategy::from_index(31).unwrap();
    let (mut a, mut b) = (0.0, 0.0);
    for seed in 0..500 {
        a += simulate(&calibrated, &none, &mut rng(seed)).outcome;
        b += simulate(&calibrated, &all, &mut rng(seed)).outcome;
    }
    assert!(b <= a, "all {b} none {a}");
}

#[test]
fn establishment_rises_with_r0() {
    let strategy = enumerate_strategies()[0];
    let rate = |r0: f64| {
        let c = CalibratedScenario::new(Scenario::default().with_r0(r0, 0.5, 0.0, 1e-10).unwrap()).unwrap();
        (0..400).filter(|&s| simulate(&c, &strategy, &mut rng(s)).established).count()
    };
    assert!(rate(2.4) > rate(1.4));
}
