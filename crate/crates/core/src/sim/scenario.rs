use serde::{Deserialize, Serialize};

use super::AGE_GROUPS;
use crate::error::{Error, Result};
use crate::threshold::{fade_out_threshold, OffspringModel};

pub type ContactMatrix = [[f64; AGE_GROUPS]; AGE_GROUPS];

/// Age shares of the default population: pre-school, school-age, young adult,
/// older adult, elderly.
pub const DEFAULT_AGE_SHARES: [f64; AGE_GROUPS] = [0.067, 0.20, 0.15, 0.45, 0.133];
pub const DEFAULT_POPULATION: u64 = 10_000;

/// Daily contacts of a member of row group with members of column group.
/// Approximately reciprocal for the default age structure; school-age mixing dominates.
pub const DEFAULT_CONTACTS: ContactMatrix = [
    [2.00, 1.50, 0.67, 2.00, 0.40],
    [0.50, 12.0, 0.80, 2.50, 0.40],
    [0.30, 1.00, 4.00, 3.00, 0.45],
    [0.30, 1.10, 1.00, 5.00, 0.80],
    [0.20, 0.60, 0.50, 2.70, 2.00],
];

/// Configuration of the age-structured surrogate epidemic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub group_sizes: [u64; AGE_GROUPS],
    pub r0: f64,
    pub contact_matrix: ContactMatrix,
    /// Infections seeded at day 0.
    pub seeds: u64,
    pub horizon_days: u32,
    pub vaccine_doses: u64,
    /// Multiplicative reduction of a vaccinee's susceptibility.
    pub vaccine_efficacy: f64,
    pub symptomatic_fraction: f64,
    /// Mean infectious duration; removal happens with daily probability `1 / period`.
    pub infectious_period_days: f64,
    /// Mean latent duration; zero makes new infections infectious the next day.
    pub latent_period_days: f64,
    /// Cumulative infections marking an established epidemic.
    pub establishment_threshold: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        let group_sizes = scaled_group_sizes(DEFAULT_POPULATION, &DEFAULT_AGE_SHARES);
        let total: u64 = group_sizes.iter().sum();
        let r0 = 1.4;
        let threshold = OffspringModel::new(r0, 0.5, 0.0)
            .and_then(|m| fade_out_threshold(&m, 1e-10))
            .expect("default offspring model is supercritical");
        Scenario {
            group_sizes,
            r0,
            contact_matrix: DEFAULT_CONTACTS,
            seeds: 10,
            horizon_days: 180,
            vaccine_doses: (0.045 * total as f64).ceil() as u64,
            vaccine_efficacy: 0.5,
            symptomatic_fraction: 0.67,
            infectious_period_days: 3.0,
            latent_period_days: 1.0,
            establishment_threshold: threshold,
        }
    }
}

/// Integer group sizes summing to `total`, by largest remainder on `shares`.
pub fn scaled_group_sizes(total: u64, shares: &[f64; AGE_GROUPS]) -> [u64; AGE_GROUPS] {
    let sum: f64 = shares.iter().sum();
    let raw: Vec<f64> = shares.iter().map(|s| total as f64 * s / sum).collect();
    let mut sizes = [0u64; AGE_GROUPS];
    for (g, r) in raw.iter().enumerate() {
        sizes[g] = r.floor() as u64;
    }
    let mut order: Vec<usize> = (0..AGE_GROUPS).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())).then(a.cmp(&b)));
    let short = total - sizes.iter().sum::<u64>();
    for &g in order.iter().take(short as usize) {
        sizes[g] += 1;
    }
    sizes
}

impl Scenario {
    pub fn total_population(&self) -> u64 {
        self.group_sizes.iter().sum()
    }

    /// Parses a flat TOML document whose keys are scenario field names.
    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.group_sizes.contains(&0) {
            return fail(format!("group sizes must be positive, got {:?}", self.group_sizes));
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return fail(format!("r0 must be positive, got {}", self.r0));
        }
        if self.contact_matrix.iter().flatten().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return fail("contact rates must be nonnegative and finite".into());
        }
        if self.seeds == 0 || self.seeds > self.total_population() {
            return fail(format!("seeds must lie in 1..={}, got {}", self.total_population(), self.seeds));
        }
        if self.horizon_days == 0 {
            return fail("horizon_days must be positive".into());
        }
        if self.vaccine_doses > self.total_population() {
            return fail(format!("vaccine_doses {} exceed the population", self.vaccine_doses));
        }
        if !(0.0..=1.0).contains(&self.vaccine_efficacy) {
            return fail(format!("vaccine_efficacy must lie in [0, 1], got {}", self.vaccine_efficacy));
        }
        if !(self.symptomatic_fraction > 0.0 && self.symptomatic_fraction <= 1.0) {
            return fail(format!("symptomatic_fraction must lie in (0, 1], got {}", self.symptomatic_fraction));
        }
        if !(self.infectious_period_days >= 1.0 && self.infectious_period_days.is_finite()) {
            return fail(format!("infectious_period_days must be at least 1, got {}", self.infectious_period_days));
        }
        let lat = self.latent_period_days;
        if !(lat == 0.0 || (lat >= 1.0 && lat.is_finite())) {
            return fail(format!("latent_period_days must be 0 or at least 1, got {lat}"));
        }
        if self.establishment_threshold == 0 {
            return fail("establishment_threshold must be positive".into());
        }
        Ok(())
    }

    /// Copy with `r0` replaced and the establishment threshold derived from a
    /// negative-binomial offspring model.
    pub fn with_r0(&self, r0: f64, dispersion: f64, controlled_fraction: f64, cutoff: f64) -> Result<Scenario> {
        let model = OffspringModel::new(r0, dispersion, controlled_fraction)?;
        let threshold = fade_out_threshold(&model, cutoff)?;
        Ok(Scenario { r0, establishment_threshold: threshold, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.group_sizes, [670, 2000, 1500, 4500, 1330]);
        assert_eq!(s.vaccine_doses, 450);
        assert_eq!(s.seeds, 10);
        assert_eq!(s.horizon_days, 180);
    }

    #[test]
    fn parse_partial_file() {
        let s = Scenario::from_toml_str("r0 = 2.0\nseeds = 5\n").unwrap();
        assert_eq!(s.r0, 2.0);
        assert_eq!(s.seeds, 5);
        assert_eq!(s.contact_matrix, DEFAULT_CONTACTS);
    }

    #[test]
    fn parse_contact_rows() {
        let text = "contact_matrix = [[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1.5]]\n";
        let s = Scenario::from_toml_str(text).unwrap();
        assert_eq!(s.contact_matrix[4][4], 1.5);
        assert!(Scenario::from_toml_str("contact_matrix = [[1,0,0,0,0]]\n").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(Scenario::from_toml_str("r_zero = 2.0\n"), Err(Error::Config(_))));
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(Scenario::from_toml_str("vaccine_efficacy = 1.5\n").is_err());
        assert!(Scenario::from_toml_str("group_sizes = [0, 1, 1, 1, 1]\n").is_err());
        assert!(Scenario::from_toml_str("vaccine_doses = 100000\n").is_err());
        assert!(Scenario::from_toml_str("infectious_period_days = 0.5\n").is_err());
    }

    #[test]
    fn threshold_follows_r0() {
        let s = Scenario::default().with_r0(2.4, 0.5, 0.0, 1e-10).unwrap();
        assert!(s.establishment_threshold < Scenario::default().establishment_threshold);
        assert!(Scenario::default().with_r0(0.9, 0.5, 0.0, 1e-10).is_err());
    }

    #[test]
    fn scaled_sizes_sum() {
        assert_eq!(scaled_group_sizes(560_000, &DEFAULT_AGE_SHARES).iter().sum::<u64>(), 560_000);
        assert_eq!(scaled_group_sizes(7, &[0.2; 5]).iter().sum::<u64>(), 7);
    }
}
