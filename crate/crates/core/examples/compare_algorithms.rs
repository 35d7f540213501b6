//! All four allocation rules on the same synthetic arms, over a few budgets.
//!
//!     cargo run --release --example compare_algorithms

use epibandit::bandit::{Algorithm, AlgorithmSettings};
use epibandit::sim::make_synthetic_environment;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> epibandit::Result<()> {
    // eight arms, attack rates 0.20..0.27; arm 0 is best
    let means: Vec<f64> = (0..8).map(|i| 0.20 + 0.01 * i as f64).collect();
    let env = make_synthetic_environment(means, vec![0.04; 8], vec![0.85; 8])?;
    let settings = AlgorithmSettings::default();
    let reps = 200;

    print!("{:>8}", "budget");
    for alg in Algorithm::ALL {
        print!("{:>20}", alg.name());
    }
    println!();
    for budget in [48, 96, 192, 384] {
        print!("{budget:>8}");
        for alg in Algorithm::ALL {
            let hits = (0..reps)
                .filter(|&s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    alg.run(&env, budget, &settings, &mut rng).is_ok_and(|r| r.arm == env.best_arm())
                })
                .count();
            print!("{:>20.3}", hits as f64 / reps as f64);
        }
        println!();
    }
    Ok(())
}
