//! Daily chain-binomial SEIR dynamics per age group, split by vaccination status.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::calibrate::calibrate_transmissibility;
use super::scenario::Scenario;
use super::strategy::{allocate_doses, VaccineStrategy};
use super::AGE_GROUPS;
use crate::error::{Error, Result};

/// A scenario together with its per-contact transmission probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedScenario {
    scenario: Scenario,
    transmissibility: f64,
}

impl CalibratedScenario {
    pub fn new(scenario: Scenario) -> Result<CalibratedScenario> {
        scenario.validate()?;
        let transmissibility = calibrate_transmissibility(&scenario)?;
        Ok(CalibratedScenario { scenario, transmissibility })
    }

    /// Uses an explicit transmissibility instead of calibrating to `r0`.
    pub fn with_transmissibility(scenario: Scenario, transmissibility: f64) -> Result<CalibratedScenario> {
        scenario.validate()?;
        if !(transmissibility >= 0.0 && transmissibility.is_finite()) {
            return Err(Error::InvalidParameter(format!("transmissibility must be nonnegative, got {transmissibility}")));
        }
        Ok(CalibratedScenario { scenario, transmissibility })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn transmissibility(&self) -> f64 {
        self.transmissibility
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    /// Symptomatic infections over total population.
    pub outcome: f64,
    /// Every infection over the horizon, seeds included.
    pub cumulative_infections: u64,
    pub established: bool,
}

/// Compartment counts of one (age group, vaccination status) stratum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Compartments {
    pub susceptible: u64,
    pub exposed: u64,
    pub infectious: u64,
    pub removed: u64,
}

impl Compartments {
    pub fn total(&self) -> u64 {
        self.susceptible + self.exposed + self.infectious + self.removed
    }
}

/// Per-day state: `[group][0]` unvaccinated, `[group][1]` vaccinated.
pub type EpidemicState = [[Compartments; 2]; AGE_GROUPS];

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
}

/// Runs the surrogate, calling `observe(day, state)` after seeding and after every day.
pub fn simulate_observed<R, F>(
    calibrated: &CalibratedScenario,
    strategy: &VaccineStrategy,
    rng: &mut R,
    mut observe: F,
) -> SimulationResult
where
    R: Rng + ?Sized,
    F: FnMut(u32, &EpidemicState),
{
    let sc = &calibrated.scenario;
    let q = calibrated.transmissibility;
    let sizes = sc.group_sizes;
    let n = sizes.map(|s| s as f64);
    let vaccinated = allocate_doses(strategy, sc.vaccine_doses, &sizes);

    let mut state: EpidemicState = [[Compartments::default(); 2]; AGE_GROUPS];
    for g in 0..AGE_GROUPS {
        state[g][0].susceptible = sizes[g] - vaccinated[g];
        state[g][1].susceptible = vaccinated[g];
    }

    let infect_target = |c: &mut Compartments| {
        c.susceptible -= 1;
        if sc.latent_period_days > 0.0 {
            c.exposed += 1;
        } else {
            c.infectious += 1;
        }
    };

    // seeds drawn uniformly from the whole population without replacement
    let mut cumulative = 0u64;
    let mut symptomatic = 0u64;
    for _ in 0..sc.seeds {
        let pool: u64 = state.iter().flatten().map(|c| c.susceptible).sum();
        if pool == 0 {
            break;
        }
        let mut pick = rng.random_range(0..pool);
        'find: for g in 0..AGE_GROUPS {
            for v in 0..2 {
                if pick < state[g][v].susceptible {
                    infect_target(&mut state[g][v]);
                    break 'find;
                }
                pick -= state[g][v].susceptible;
            }
        }
        cumulative += 1;
    }
    symptomatic += binomial(cumulative, sc.symptomatic_fraction, rng);
    observe(0, &state);

    let p_progress = if sc.latent_period_days > 0.0 { 1.0 / sc.latent_period_days } else { 1.0 };
    let p_recover = 1.0 / sc.infectious_period_days;
    let susceptibility = [1.0, 1.0 - sc.vaccine_efficacy];

    for day in 1..=sc.horizon_days {
        let active: u64 = state.iter().flatten().map(|c| c.exposed + c.infectious).sum();
        if active == 0 {
            break;
        }
        let prevalence: [f64; AGE_GROUPS] =
            std::array::from_fn(|h| (state[h][0].infectious + state[h][1].infectious) as f64 / n[h]);

        for g in 0..AGE_GROUPS {
            let force = q * (0..AGE_GROUPS).map(|h| sc.contact_matrix[g][h] * prevalence[h]).sum::<f64>();
            for v in 0..2 {
                let c = state[g][v];
                let p_inf = -(-force * susceptibility[v]).exp_m1();
                let infected = binomial(c.susceptible, p_inf, rng);
                let progressed = if sc.latent_period_days > 0.0 { binomial(c.exposed, p_progress, rng) } else { 0 };
                let recovered = binomial(c.infectious, p_recover, rng);

                let s = &mut state[g][v];
                s.susceptible -= infected;
                s.removed += recovered;
                s.infectious -= recovered;
                if sc.latent_period_days > 0.0 {
                    s.exposed = s.exposed + infected - progressed;
                    s.infectious += progressed;
                } else {
                    s.infectious += infected;
                }
                cumulative += infected;
                symptomatic += binomial(infected, sc.symptomatic_fraction, rng);
            }
        }
        observe(day, &state);
    }

    let total = sc.total_population() as f64;
    SimulationResult {
        outcome: symptomatic as f64 / total,
        cumulative_infections: cumulative,
        established: cumulative >= sc.establishment_threshold,
    }
}

/// One stochastic epidemic under `strategy`; deterministic given the stream.
pub fn simulate<R: Rng + ?Sized>(
    calibrated: &CalibratedScenario,
    strategy: &VaccineStrategy,
    rng: &mut R,
) -> SimulationResult {
    simulate_observed(calibrated, strategy, rng, |_, _| {})
}
