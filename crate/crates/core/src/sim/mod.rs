//! Desk-scale surrogate of an individual-based influenza model.
//!
//! A population in five age groups mixes through a contact matrix; vaccine
//! doses are spread over the groups a strategy selects. Each evaluation is one
//! stochastic epidemic, so the outcome distribution is bimodal: outbreaks that
//! fade out early, and established epidemics with an approximately Gaussian
//! attack rate.

mod calibrate;
mod environment;
mod model;
mod scenario;
mod strategy;

pub const AGE_GROUPS: usize = 5;

pub use calibrate::{calibrate_transmissibility, dominant_eigenvalue, next_generation_matrix};
pub use environment::{
    make_environment, make_synthetic_environment, SurrogateEnvironment, SyntheticEnvironment,
};
pub use model::{simulate, simulate_observed, CalibratedScenario, Compartments, EpidemicState, SimulationResult};
pub use scenario::{scaled_group_sizes, ContactMatrix, Scenario, DEFAULT_AGE_SHARES, DEFAULT_CONTACTS, DEFAULT_POPULATION};
pub use strategy::{allocate_doses, enumerate_strategies, VaccineStrategy, STRATEGY_COUNT};
