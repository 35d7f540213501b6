//! Plugging a user-defined simulator into the algorithms through `Environment`.
//!
//!     cargo run --example custom_environment

use epibandit::bandit::{Algorithm, AlgorithmSettings, Environment, RawOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Three school-closure lengths; longer closures cut attack rate but
/// outbreaks sometimes fizzle regardless.
struct SchoolClosure {
    weeks: [f64; 3],
}

impl Environment for SchoolClosure {
    fn arm_count(&self) -> usize {
        self.weeks.len()
    }

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome {
        if rng.random::<f64>() < 0.2 {
            return RawOutcome { outcome: 0.0, established: false };
        }
        let base = 0.35 - 0.03 * self.weeks[arm];
        RawOutcome { outcome: (base + rng.random_range(-0.05..0.05)).clamp(0.0, 1.0), established: true }
    }
}

fn main() -> epibandit::Result<()> {
    let env = SchoolClosure { weeks: [1.0, 2.0, 4.0] };
    for alg in Algorithm::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rec = alg.run(&env, 60, &AlgorithmSettings::default(), &mut rng)?;
        let censored = rec.pull_log().iter().filter(|p| !p.established).count();
        println!("{:<20} arm {} ({censored} censored pulls)", alg.name(), rec.arm);
    }
    Ok(())
}
