//! Step-by-step view of BayesGap: leader, challenger and the arm it pulls.
//!
//!     cargo run --example bayesgap_trace

use epibandit::bandit::{run_bayesgap, BayesGapConfig};
use epibandit::sim::make_synthetic_environment;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> epibandit::Result<()> {
    let env = make_synthetic_environment(vec![0.30, 0.26, 0.34, 0.27], vec![0.05; 4], vec![1.0; 4])?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rec = run_bayesgap(&env, 80, &BayesGapConfig::default(), &mut rng)?;

    for step in rec.diagnostics.gap_trace.iter().step_by(8) {
        println!(
            "t={:>3} beta={:.3} leader={} challenger={} pulled={:?} leader_gap={:+.4}",
            step.t,
            step.beta,
            step.leader,
            step.challenger,
            step.pulled,
            step.leader_gap()
        );
    }
    println!("pulls per arm: {:?}", rec.diagnostics.run.pulls_per_arm());
    println!("recommended arm {} (true best {})", rec.arm, env.best_arm());
    Ok(())
}
