//! The age-structured epidemic surrogate: calibration, a daily trajectory and
//! the bimodal outcome distribution that motivates censoring.
//!
//!     cargo run --release --example surrogate

use epibandit::sim::{simulate, simulate_observed, CalibratedScenario, Scenario, VaccineStrategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> epibandit::Result<()> {
    let scenario = Scenario::default().with_r0(1.4, 0.5, 0.0, 1e-10)?;
    let calibrated = CalibratedScenario::new(scenario)?;
    println!(
        "population {}, fade-out threshold {}, transmissibility {:.5}",
        calibrated.scenario().total_population(),
        calibrated.scenario().establishment_threshold,
        calibrated.transmissibility()
    );

    let strategy = VaccineStrategy::from_index(8).expect("index below 32");
    println!("strategy {}: {:?}", strategy.index(), strategy.allocate);

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let result = simulate_observed(&calibrated, &strategy, &mut rng, |day, state| {
        if day % 30 == 0 {
            let infectious: u64 = state.iter().flatten().map(|c| c.infectious).sum();
            println!("day {day:>3}: {infectious} infectious");
        }
    });
    println!("{result:?}");

    let mut outcomes = Vec::new();
    let mut faded = 0;
    for seed in 0..300 {
        let r = simulate(&calibrated, &strategy, &mut ChaCha8Rng::seed_from_u64(seed));
        if r.established {
            outcomes.push(r.outcome);
        } else {
            faded += 1;
        }
    }
    let mean = outcomes.iter().sum::<f64>() / outcomes.len() as f64;
    println!("{faded} of 300 runs faded out; established runs average attack rate {mean:.4}");
    Ok(())
}
