//! Probability that a recommended arm truly has the largest mean, and the
//! exact binomial intervals used to check that statistic against outcomes.

use std::sync::OnceLock;

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::stats::TPosterior;

const NODES_PER_PANEL: usize = 16;
const BASE_PANELS: usize = 32;
const HALF_WIDTH_IN_SPREADS: f64 = 10.0;
const MIN_PANEL_IN_SPREADS: f64 = 0.25;
/// Below the point where the other arms' CDF product drops under this, the
/// integrand contributes less than it in total.
const NEGLIGIBLE_PRODUCT: f64 = 1e-15;
/// Extra panel boundaries placed around every posterior, in units of its spread.
const BREAKPOINTS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Sum of the rule applied on each consecutive pair of `breaks`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks.windows(2).map(|w| self.integrate(w[0], w[1], &mut f)).sum()
    }
}

/// `P_n(x)` and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL))
}

/// Posteriors of all arms together with the arm that was recommended.
#[derive(Debug, Clone)]
pub struct PosteriorSet {
    posteriors: Vec<TPosterior>,
    recommended: usize,
}

impl PosteriorSet {
    pub fn new(posteriors: Vec<TPosterior>, recommended: usize) -> Result<PosteriorSet> {
        if recommended >= posteriors.len() {
            return Err(Error::InvalidParameter(format!(
                "recommended arm {recommended} out of range for {} posteriors",
                posteriors.len()
            )));
        }
        if let Some(p) = posteriors.iter().find(|p| p.df() < 2.0) {
            return Err(Error::InvalidParameter(format!("posterior needs df >= 2, got {}", p.df())));
        }
        Ok(PosteriorSet { posteriors, recommended })
    }

    pub fn posteriors(&self) -> &[TPosterior] {
        &self.posteriors
    }

    pub fn recommended(&self) -> usize {
        self.recommended
    }

    pub fn with_recommended(&self, recommended: usize) -> Result<PosteriorSet> {
        PosteriorSet::new(self.posteriors.clone(), recommended)
    }
}

/// Width used to place the integration range around a posterior.
fn spread(p: &TPosterior) -> f64 {
    p.std_dev().unwrap_or(3.0 * p.scale())
}

/// `P(mu_J = max_k mu_k)` for independent t posteriors, by composite
/// Gauss–Legendre quadrature of `prod_{k != J} F_k(x) f_J(x)`.
///
/// The range spans every posterior's location +/- 10 spreads, cut into 32
/// uniform panels plus extra boundaries around each posterior so narrow
/// arms are resolved. Mass of `f_J` beyond the right end is added
/// analytically (the product of CDFs is near one there). The range is cut on
/// the left where the product of CDFs falls below 1e-15.
pub fn probability_of_success(set: &PosteriorSet) -> f64 {
    let posts = &set.posteriors;
    let j = set.recommended;
    if posts.len() == 1 {
        return 1.0;
    }
    let target = &posts[j];

    let lo = posts
        .iter()
        .map(|p| p.location() - HALF_WIDTH_IN_SPREADS * spread(p))
        .fold(f64::INFINITY, f64::min);
    let hi = posts
        .iter()
        .map(|p| p.location() + HALF_WIDTH_IN_SPREADS * spread(p))
        .fold(f64::NEG_INFINITY, f64::max);

    let others = |x: f64| -> f64 {
        let mut prod = 1.0;
        for (k, p) in posts.iter().enumerate() {
            if k != j {
                prod *= p.cdf(x);
                if prod == 0.0 {
                    break;
                }
            }
        }
        prod
    };

    // others is nondecreasing, so bisect for the left end of its support
    let lo = if others(lo) >= NEGLIGIBLE_PRODUCT {
        lo
    } else {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if others(mid) < NEGLIGIBLE_PRODUCT {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    };

    let mut breaks: Vec<f64> = (0..=BASE_PANELS)
        .map(|i| lo + (hi - lo) * i as f64 / BASE_PANELS as f64)
        .collect();
    for p in posts {
        let w = spread(p);
        for c in BREAKPOINTS {
            for x in [p.location() - c * w, p.location() + c * w] {
                if x > lo && x < hi {
                    breaks.push(x);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    // overlapping arms contribute near-duplicate boundaries; a quarter of the
    // narrowest spread still resolves every CDF transition
    let min_gap = MIN_PANEL_IN_SPREADS * posts.iter().map(spread).fold(f64::INFINITY, f64::min);
    let last = breaks[breaks.len() - 1];
    breaks.dedup_by(|a, b| *a - *b < min_gap && *a != last);

    let body = panel_rule().integrate_composite(&breaks, |x| others(x) * target.pdf(x));
    let right_tail = target.sf(hi) * others(hi);
    (body + right_tail).clamp(0.0, 1.0)
}

/// Exact two-sided binomial interval from beta quantiles.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 { 0.0 } else { beta_quantile(k, n - k + 1.0, alpha / 2.0) };
    let upper = if successes == trials { 1.0 } else { beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0) };
    Ok((lower, upper))
}

/// Quantile of `Beta(a, b)` by bisection on the regularized incomplete beta.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Per-bin Bernoulli summary of recommendation correctness.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CalibrationBin {
    pub lower_edge: f64,
    pub upper_edge: f64,
    pub trials: u64,
    pub successes: u64,
    /// `None` for an empty bin.
    pub rate: Option<f64>,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
}

impl CalibrationBin {
    pub fn ci_half_width(&self) -> Option<f64> {
        Some(0.5 * (self.ci_upper? - self.ci_lower?))
    }
}

/// Bins `(P_s, correct)` records on `[edge_i, edge_{i+1})` with 95% Clopper–Pearson
/// intervals. The final bin is closed on the right so `P_s = 1` is counted;
/// records outside `[edges[0], edges[last]]` are dropped.
pub fn bin_success_calibration(records: &[(f64, bool)], edges: &[f64]) -> Result<Vec<CalibrationBin>> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("bin edges must be strictly increasing with at least two entries".into()));
    }
    let nbins = edges.len() - 1;
    let mut counts = vec![(0u64, 0u64); nbins];
    for &(p, correct) in records {
        let idx = if p == edges[nbins] {
            Some(nbins - 1)
        } else {
            edges.windows(2).position(|w| p >= w[0] && p < w[1])
        };
        if let Some(i) = idx {
            counts[i].0 += 1;
            counts[i].1 += u64::from(correct);
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, (trials, successes))| {
            let (rate, ci) = if trials == 0 {
                (None, None)
            } else {
                (Some(successes as f64 / trials as f64), Some(clopper_pearson(successes, trials, 0.95)?))
            };
            Ok(CalibrationBin {
                lower_edge: edges[i],
                upper_edge: edges[i + 1],
                trials,
                successes,
                rate,
                ci_lower: ci.map(|c| c.0),
                ci_upper: ci.map(|c| c.1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::new(16);
        let s: f64 = rule.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 31 is integrated exactly
        let v = rule.integrate(0.0, 1.0, |x| x.powi(30) + x.powi(31));
        assert!((v - (1.0 / 31.0 + 1.0 / 32.0)).abs() < 1e-14);
        let v = rule.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_rule_has_centre_node() {
        let rule = GaussLegendre::new(5);
        assert!(rule.nodes()[2].abs() < 1e-15);
        assert!((rule.weights()[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_sets() {
        let p = TPosterior::new(5.0, 0.3, 0.1).unwrap();
        let two = PosteriorSet::new(vec![p, p], 1).unwrap();
        assert!((probability_of_success(&two) - 0.5).abs() < 1e-6);
        let seven = PosteriorSet::new(vec![p; 7], 3).unwrap();
        assert!((probability_of_success(&seven) - 1.0 / 7.0).abs() < 1e-6);
    }

    #[test]
    fn separated_recommendation() {
        let a = TPosterior::new(10.0, 0.0, 0.01).unwrap();
        let b = TPosterior::new(10.0, 0.2 + 20.0 * 0.02, 0.01).unwrap();
        let set = PosteriorSet::new(vec![a, b, a], 1).unwrap();
        assert!(probability_of_success(&set) >= 1.0 - 1e-4);
    }

    #[test]
    fn invalid_sets() {
        let p = TPosterior::new(5.0, 0.3, 0.1).unwrap();
        assert!(PosteriorSet::new(vec![p], 1).is_err());
        let low = TPosterior::new(1.5, 0.3, 0.1).unwrap();
        assert!(PosteriorSet::new(vec![p, low], 0).is_err());
    }

    #[test]
    fn clopper_pearson_boundaries() {
        assert_eq!(clopper_pearson(0, 10, 0.95).unwrap().0, 0.0);
        assert_eq!(clopper_pearson(10, 10, 0.95).unwrap().1, 1.0);
        let (lo, hi) = clopper_pearson(5, 10, 0.95).unwrap();
        assert!((lo - 0.187).abs() < 1e-3 && (hi - 0.813).abs() < 1e-3, "({lo}, {hi})");
        assert!(clopper_pearson(3, 2, 0.95).is_err());
        assert!(clopper_pearson(0, 0, 0.95).is_err());
    }

    #[test]
    fn empty_and_full_bins() {
        let edges = [0.5, 0.75, 1.0];
        let bins = bin_success_calibration(&[], &edges).unwrap();
        assert_eq!(bins.len(), 2);
        assert!(bins.iter().all(|b| b.trials == 0 && b.rate.is_none()));

        let recs = [(0.8, true), (0.9, true), (1.0, true)];
        let bins = bin_success_calibration(&recs, &edges).unwrap();
        assert_eq!(bins[1].trials, 3);
        assert_eq!(bins[1].rate, Some(1.0));
        assert_eq!(bins[1].ci_upper, Some(1.0));
        assert!(bin_success_calibration(&recs, &[0.5, 0.5]).is_err());
    }
}
