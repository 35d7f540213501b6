//! Fixed-budget best-arm identification of epidemic mitigation strategies.
//!
//! Each candidate strategy is an arm of a bandit; pulling it runs one
//! stochastic epidemic simulation. Given a fixed number of simulations the
//! algorithms in [`bandit`] recommend the strategy with the smallest expected
//! attack rate:
//!
//! - [`bandit::run_uniform`]: uniform random allocation, the usual baseline.
//! - [`bandit::run_successive_rejects`]: phase-wise elimination.
//! - [`bandit::run_bayesgap`]: gap-based Bayesian algorithm with Student-t bounds.
//! - [`bandit::run_ttts`]: top-two Thompson sampling.
//!
//! Outbreaks that fade out before establishing are censored using the
//! threshold from [`threshold`]; Bayesian posteriors live in [`stats`]; the
//! confidence of a recommendation is computed in [`confidence`]; [`sim`]
//! provides the surrogate epidemic model and [`harness`] the experiment
//! pipeline behind the `epibandit` binary.

pub mod bandit;
pub mod confidence;
mod error;
pub mod harness;
pub mod sim;
pub mod stats;
pub mod threshold;

pub use error::{Error, Result};
