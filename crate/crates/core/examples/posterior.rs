//! Running statistics feeding a Student-t posterior on an arm's mean.
//!
//!     cargo run --example posterior

use epibandit::stats::{t_tail_bound, ArmStatistics};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> epibandit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(-0.25, 0.04).unwrap();

    let mut stats = ArmStatistics::EMPTY;
    for n in 1..=64u32 {
        stats = stats.update(noise.sample(&mut rng));
        if n.is_power_of_two() && n >= 2 {
            let post = stats.posterior()?;
            let (lo, hi) = (post.location() - 2.0 * post.scale(), post.location() + 2.0 * post.scale());
            println!(
                "n={n:>3} mean={:+.4} df={:>3} scale={:.5} P(mu > -0.25)={:.3} [{lo:+.4}, {hi:+.4}]",
                post.location(),
                post.df(),
                post.scale(),
                post.sf(-0.25),
            );
        }
    }

    let post = stats.posterior()?;
    let draws: Vec<f64> = (0..5).map(|_| post.sample(&mut rng)).collect();
    println!("posterior draws: {draws:.4?}");

    // upper bound on the probability mass beyond beta scales, used by BayesGap
    for beta in [1.0, 2.0, 3.0] {
        println!("tail bound df=10 beta={beta}: {:.4}", t_tail_bound(10, beta)?);
    }
    Ok(())
}
