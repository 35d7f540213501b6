//! Running reward statistics and the Student-t posterior over an arm's mean.
//!
//! Rewards are modelled as Gaussian with unknown mean and variance. Under the
//! uninformative prior `sigma^-3` on `(mu, sigma^2)`, the posterior on `mu`
//! after `n` samples is a nonstandardized t distribution with `n` degrees of
//! freedom, location at the sample mean and scale `sqrt(S) / n`, where `S` is
//! the sum of squared deviations.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Sufficient statistics of the accepted rewards of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct ArmStatistics {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from `mean`.
    pub sum_sq: f64,
}

impl ArmStatistics {
    pub const EMPTY: ArmStatistics = ArmStatistics { count: 0, mean: 0.0, sum_sq: 0.0 };

    /// Welford update with one more reward.
    #[must_use]
    pub fn update(self, reward: f64) -> ArmStatistics {
        let count = self.count + 1;
        let delta = reward - self.mean;
        let mean = self.mean + delta / count as f64;
        let sum_sq = (self.sum_sq + delta * (reward - mean)).max(0.0);
        ArmStatistics { count, mean, sum_sq }
    }

    pub fn from_rewards<I: IntoIterator<Item = f64>>(rewards: I) -> ArmStatistics {
        rewards.into_iter().fold(ArmStatistics::EMPTY, ArmStatistics::update)
    }

    /// Unbiased sample variance, `None` below two samples.
    pub fn sample_variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.sum_sq / (self.count - 1) as f64)
    }

    pub fn posterior(&self) -> Result<TPosterior> {
        posterior_from_stats(self)
    }
}

pub fn update_statistics(stats: ArmStatistics, reward: f64) -> ArmStatistics {
    stats.update(reward)
}

/// Nonstandardized Student-t distribution `location + scale * T_df`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TPosterior {
    df: f64,
    location: f64,
    scale: f64,
}

impl TPosterior {
    pub fn new(df: f64, location: f64, scale: f64) -> Result<TPosterior> {
        if !(df > 0.0) || !df.is_finite() {
            return Err(Error::InvalidParameter(format!("degrees of freedom must be positive, got {df}")));
        }
        if !location.is_finite() {
            return Err(Error::InvalidParameter(format!("location must be finite, got {location}")));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(TPosterior { df, location, scale })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Mean of the distribution; defined for `df > 1`, equal to the location.
    pub fn mean(&self) -> f64 {
        self.location
    }

    /// Standard deviation `scale * sqrt(df / (df - 2))`, `None` unless `df > 2`.
    pub fn std_dev(&self) -> Option<f64> {
        (self.df > 2.0).then(|| self.scale * (self.df / (self.df - 2.0)).sqrt())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        t_pdf(self.df, (x - self.location) / self.scale) / self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        t_cdf(self.df, (x - self.location) / self.scale)
    }

    /// Survival function `P(X > x)`, computed without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        t_cdf(self.df, -(x - self.location) / self.scale)
    }

    /// Same distribution with the location moved by `shift`.
    #[must_use]
    pub fn shifted(&self, shift: f64) -> TPosterior {
        TPosterior { location: self.location + shift, ..*self }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.location + self.scale * sample_standard_t(self.df, rng)
    }
}

pub fn posterior_from_stats(stats: &ArmStatistics) -> Result<TPosterior> {
    if stats.count < 2 || !(stats.sum_sq > 0.0) {
        return Err(Error::DegeneratePosterior { count: stats.count, sum_sq: stats.sum_sq });
    }
    let n = stats.count as f64;
    TPosterior::new(n, stats.mean, stats.sum_sq.sqrt() / n)
}

pub fn sample_posterior<R: Rng + ?Sized>(post: &TPosterior, rng: &mut R) -> f64 {
    post.sample(rng)
}

/// Standard t variate as a normal over the root of a scaled chi-square.
fn sample_standard_t<R: Rng + ?Sized>(df: f64, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    // df > 0 is guaranteed by TPosterior::new
    let chi = ChiSquared::new(df).expect("positive degrees of freedom");
    let v: f64 = chi.sample(rng);
    z / (v / df).sqrt()
}

/// Normalizing constant of the standard t density, `Gamma((v+1)/2) / (Gamma(v/2) sqrt(pi v))`.
pub fn t_normalizer(df: f64) -> f64 {
    (ln_gamma(0.5 * df + 0.5) - ln_gamma(0.5 * df)).exp() / (std::f64::consts::PI * df).sqrt()
}

pub fn t_pdf(df: f64, x: f64) -> f64 {
    t_normalizer(df) * (1.0 + x * x / df).powf(-0.5 * (df + 1.0))
}

pub fn t_cdf(df: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let x2 = x * x;
    // lower tail mass P(T < -|x|)
    let tail = if x2 < df {
        // I_{x^2/(df+x^2)}(1/2, df/2) is better conditioned near the centre
        0.5 - 0.5 * beta_reg(0.5, 0.5 * df, x2 / (df + x2))
    } else {
        0.5 * beta_reg(0.5 * df, 0.5, df / (df + x2))
    };
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Upper bound on `P(|X - mu| >= beta * sigma)` for a t variate with `df` degrees of
/// freedom and standard deviation `sigma`, clamped to 1.
pub fn t_tail_bound(df: u32, beta: f64) -> Result<f64> {
    if df < 3 {
        return Err(Error::InvalidParameter(format!("tail bound needs df >= 3, got {df}")));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("tail bound needs beta > 0, got {beta}")));
    }
    if beta.is_infinite() {
        return Ok(0.0);
    }
    let v = f64::from(df);
    let lead = 2.0 * (v * (v - 2.0)).sqrt() / (v - 1.0) * t_normalizer(v) / beta;
    let decay = (1.0 + beta * beta / (v - 2.0)).powf(-0.5 * (v - 1.0));
    Ok((lead * decay).min(1.0))
}
