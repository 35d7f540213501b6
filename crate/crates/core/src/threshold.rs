//! Extinction probability of a negative-binomial branching process and the
//! fade-out threshold used to censor outbreaks that never took off.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 10_000;
const BISECTION_UPPER: f64 = 1.0 - 1e-9;
const MAX_BISECTIONS: usize = 200;

/// Offspring distribution `NB(r0, dispersion)` with a fraction of controlled
/// (non-transmitting) individuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffspringModel {
    r0: f64,
    dispersion: f64,
    controlled_fraction: f64,
}

impl OffspringModel {
    pub fn new(r0: f64, dispersion: f64, controlled_fraction: f64) -> Result<OffspringModel> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
        }
        if !(dispersion > 0.0 && dispersion.is_finite()) {
            return Err(Error::InvalidParameter(format!("dispersion must be positive, got {dispersion}")));
        }
        if !(0.0..=1.0).contains(&controlled_fraction) {
            return Err(Error::InvalidParameter(format!(
                "controlled fraction must lie in [0, 1], got {controlled_fraction}"
            )));
        }
        Ok(OffspringModel { r0, dispersion, controlled_fraction })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    pub fn controlled_fraction(&self) -> f64 {
        self.controlled_fraction
    }

    /// Mean offspring count once the controlled fraction is removed.
    pub fn effective_r(&self) -> f64 {
        (1.0 - self.controlled_fraction) * self.r0
    }

    pub fn is_supercritical(&self) -> bool {
        self.effective_r() > 1.0
    }

    pub fn pgf(&self, s: f64) -> f64 {
        pgf(self, s)
    }
}

/// Probability generating function of the controlled offspring distribution.
pub fn pgf(model: &OffspringModel, s: f64) -> f64 {
    if s == 1.0 {
        return 1.0;
    }
    let c = model.controlled_fraction;
    let base = 1.0 + model.r0 / model.dispersion * (1.0 - s);
    c + (1.0 - c) * base.powf(-model.dispersion)
}

/// Smallest fixed point of the pgf on `[0, 1]`.
///
/// Iterates `s <- g(s)` from zero, which increases monotonically to the
/// minimal root. Near criticality the iteration is slow, so after
/// `MAX_ITERATIONS` steps it falls back to bisection on `g(s) - s` over
/// `[s_k, 1 - 1e-9]`, where `s_k` is the last iterate (still below the root).
pub fn extinction_probability(model: &OffspringModel, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if !model.is_supercritical() {
        return Ok(1.0);
    }

    let mut s = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let next = pgf(model, s);
        if (next - s).abs() <= tol * 1e-3 && (pgf(model, next) - next).abs() <= tol {
            return Ok(next);
        }
        s = next;
    }

    // g(s) - s is positive below the minimal root and negative between it and 1.
    let h = |x: f64| pgf(model, x) - x;
    let (mut lo, mut hi) = (s, BISECTION_UPPER);
    if h(hi) > 0.0 {
        return Err(Error::NoConvergence(format!(
            "g(s) - s does not change sign on [{lo}, {hi}] for {model:?}"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * 4.0 || h(lo).abs() <= tol * 1e-3 {
            break;
        }
    }
    let p = if h(lo).abs() <= h(hi).abs() { lo } else { hi };
    if h(p).abs() <= tol {
        Ok(p)
    } else {
        Err(Error::NoConvergence(format!(
            "bisection residual {} exceeds tolerance {tol} for {model:?}",
            h(p).abs()
        )))
    }
}

/// Least integer `t` with `p_ext^t <= cutoff` given an extinction probability.
pub fn threshold_from_extinction(p_ext: f64, cutoff: f64) -> Result<u64> {
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(Error::InvalidParameter(format!("cutoff must lie in (0, 1), got {cutoff}")));
    }
    if !(0.0..1.0).contains(&p_ext) {
        return Err(Error::InvalidParameter(format!("extinction probability must lie in [0, 1), got {p_ext}")));
    }
    if p_ext == 0.0 {
        return Ok(1);
    }
    let mut t = (cutoff.ln() / p_ext.ln()).ceil().max(1.0) as u64;
    // guard the ceiling against rounding at exact powers
    while t > 1 && p_ext.powf((t - 1) as f64) <= cutoff {
        t -= 1;
    }
    while p_ext.powf(t as f64) > cutoff {
        t += 1;
    }
    Ok(t)
}

/// Cumulative infection count above which the residual extinction
/// probability of an outbreak is at most `cutoff`.
pub fn fade_out_threshold(model: &OffspringModel, cutoff: f64) -> Result<u64> {
    if !model.is_supercritical() {
        return Err(Error::Subcritical { effective_r: model.effective_r() });
    }
    let p = extinction_probability(model, 1e-12)?;
    threshold_from_extinction(p, cutoff)
}
