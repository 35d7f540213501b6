use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::model::{simulate, CalibratedScenario};
use super::strategy::VaccineStrategy;
use crate::bandit::{Environment, RawOutcome};
use crate::error::{Error, Result};

/// Each arm runs the surrogate epidemic under one vaccine strategy.
#[derive(Debug, Clone)]
pub struct SurrogateEnvironment {
    scenario: CalibratedScenario,
    strategies: Vec<VaccineStrategy>,
}

impl SurrogateEnvironment {
    pub fn scenario(&self) -> &CalibratedScenario {
        &self.scenario
    }

    pub fn strategies(&self) -> &[VaccineStrategy] {
        &self.strategies
    }
}

pub fn make_environment(scenario: CalibratedScenario, strategies: Vec<VaccineStrategy>) -> Result<SurrogateEnvironment> {
    if strategies.is_empty() {
        return Err(Error::InvalidParameter("environment needs at least one strategy".into()));
    }
    Ok(SurrogateEnvironment { scenario, strategies })
}

impl Environment for SurrogateEnvironment {
    fn arm_count(&self) -> usize {
        self.strategies.len()
    }

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome {
        let r = simulate(&self.scenario, &self.strategies[arm], rng);
        RawOutcome { outcome: r.outcome, established: r.established }
    }
}

const TRUNCATION_TRIES: usize = 1000;

/// Arms with Gaussian outcomes truncated to `[0, 1]` and a per-arm
/// establishment probability. Non-established pulls report an outcome of 0.
#[derive(Debug, Clone)]
pub struct SyntheticEnvironment {
    means: Vec<f64>,
    sigmas: Vec<f64>,
    establish_prob: Vec<f64>,
}

impl SyntheticEnvironment {
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn establish_prob(&self) -> &[f64] {
        &self.establish_prob
    }

    /// Arm with the smallest mean outcome (lowest index on ties).
    pub fn best_arm(&self) -> usize {
        self.means
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |b, (i, &m)| if m < b.1 { (i, m) } else { b })
            .0
    }
}

pub fn make_synthetic_environment(
    means: Vec<f64>,
    sigmas: Vec<f64>,
    establish_prob: Vec<f64>,
) -> Result<SyntheticEnvironment> {
    if means.is_empty() || means.len() != sigmas.len() || means.len() != establish_prob.len() {
        return Err(Error::InvalidParameter("means, sigmas and establish_prob need equal nonzero length".into()));
    }
    if sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter("sigmas must be positive".into()));
    }
    if establish_prob.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter("establishment probabilities must lie in [0, 1]".into()));
    }
    if means.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidParameter("means must be finite".into()));
    }
    Ok(SyntheticEnvironment { means, sigmas, establish_prob })
}

impl Environment for SyntheticEnvironment {
    fn arm_count(&self) -> usize {
        self.means.len()
    }

    fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> RawOutcome {
        let established = rng.random::<f64>() < self.establish_prob[arm];
        if !established {
            return RawOutcome { outcome: 0.0, established };
        }
        let normal = Normal::new(self.means[arm], self.sigmas[arm]).expect("validated sigma");
        let mut x = normal.sample(rng);
        for _ in 0..TRUNCATION_TRIES {
            if (0.0..=1.0).contains(&x) {
                break;
            }
            x = normal.sample(rng);
        }
        RawOutcome { outcome: x.clamp(0.0, 1.0), established }
    }
}
