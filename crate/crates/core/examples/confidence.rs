//! Probability that a TTTS recommendation is correct, and how well those
//! probabilities are calibrated against the truth.
//!
//!     cargo run --release --example confidence

use epibandit::bandit::{run_ttts, TttsConfig};
use epibandit::confidence::bin_success_calibration;
use epibandit::harness::calibration_edges;
use epibandit::sim::make_synthetic_environment;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> epibandit::Result<()> {
    let means = vec![0.22, 0.24, 0.25, 0.27, 0.30];
    let env = make_synthetic_environment(means, vec![0.05; 5], vec![0.9; 5])?;
    let omega = TttsConfig::default().omega;

    let mut records = Vec::new();
    for seed in 0..400 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = 20 + 10 * (seed as usize % 8);
        let rec = run_ttts(&env, budget, omega, &mut rng)?;
        if let Some(p) = rec.posterior_success_probability() {
            records.push((p, rec.arm == env.best_arm()));
        }
    }

    println!("{:>12} {:>7} {:>7} {:>17}", "bin", "trials", "rate", "95% interval");
    for bin in bin_success_calibration(&records, &calibration_edges())? {
        match (bin.rate, bin.ci_lower, bin.ci_upper) {
            (Some(rate), Some(lo), Some(hi)) => println!(
                "[{:.2}, {:.2}) {:>7} {rate:>7.3} [{lo:.3}, {hi:.3}]",
                bin.lower_edge, bin.upper_edge, bin.trials
            ),
            _ => println!("[{:.2}, {:.2}) {:>7}", bin.lower_edge, bin.upper_edge, bin.trials),
        }
    }
    Ok(())
}
