//! Maps a target R0 onto the per-contact transmission probability of the surrogate.

use super::scenario::{ContactMatrix, Scenario};
use super::AGE_GROUPS;
use crate::error::{Error, Result};

const POWER_ITERATIONS: usize = 100_000;

/// Next-generation matrix per unit transmissibility: entry `(i, j)` is the
/// expected number of infections in group `i` caused by one infectious member
/// of group `j` over its infectious period, in a fully susceptible population.
pub fn next_generation_matrix(scenario: &Scenario) -> ContactMatrix {
    let n = scenario.group_sizes.map(|s| s as f64);
    let mut m = [[0.0; AGE_GROUPS]; AGE_GROUPS];
    for i in 0..AGE_GROUPS {
        for j in 0..AGE_GROUPS {
            m[i][j] = scenario.contact_matrix[i][j] * n[i] / n[j] * scenario.infectious_period_days;
        }
    }
    m
}

/// Perron root of a nonnegative matrix by power iteration on `M + I`.
///
/// The shift makes the iteration aperiodic; convergence is declared when the
/// Collatz–Wielandt bounds `min (Mx)_i / x_i <= rho <= max (Mx)_i / x_i` meet.
pub fn dominant_eigenvalue(m: &ContactMatrix) -> Result<f64> {
    if m.iter().flatten().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter("matrix entries must be nonnegative and finite".into()));
    }
    let mut x = [1.0; AGE_GROUPS];
    for _ in 0..POWER_ITERATIONS {
        let mut y = [0.0; AGE_GROUPS];
        for i in 0..AGE_GROUPS {
            y[i] = x[i] + (0..AGE_GROUPS).map(|j| m[i][j] * x[j]).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..AGE_GROUPS {
            if x[i] > 1e-300 {
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 {
            return Ok(0.0);
        }
        for i in 0..AGE_GROUPS {
            x[i] = y[i] / norm;
        }
        if hi - lo <= 1e-14 * hi {
            return Ok(0.5 * (lo + hi) - 1.0);
        }
    }
    Err(Error::NoConvergence("power iteration for the dominant eigenvalue".into()))
}

/// Transmission probability per contact-day giving the scenario's `r0` as the
/// dominant eigenvalue of the next-generation matrix.
pub fn calibrate_transmissibility(scenario: &Scenario) -> Result<f64> {
    let rho = dominant_eigenvalue(&next_generation_matrix(scenario))?;
    if !(rho > 0.0) {
        return Err(Error::NoConvergence("next-generation matrix has no positive eigenvalue".into()));
    }
    // the dominant eigenvalue is linear in the transmissibility
    Ok(scenario.r0 / rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_closed_form() {
        let mut s = Scenario { group_sizes: [1000; 5], infectious_period_days: 3.0, ..Scenario::default() };
        s.contact_matrix = [[0.0; 5]; 5];
        for (i, row) in s.contact_matrix.iter_mut().enumerate() {
            row[i] = 6.0;
        }
        s.r0 = 1.8;
        let q = calibrate_transmissibility(&s).unwrap();
        assert!((q - 1.8 / (6.0 * 3.0)).abs() < 1e-8);
    }

    #[test]
    fn linear_in_r0() {
        let s = Scenario::default();
        let q1 = calibrate_transmissibility(&s).unwrap();
        let q2 = calibrate_transmissibility(&Scenario { r0: 2.0 * s.r0, ..s.clone() }).unwrap();
        assert!((q2 - 2.0 * q1).abs() < 1e-12 * q2);
    }

    #[test]
    fn zero_matrix_fails() {
        let s = Scenario { contact_matrix: [[0.0; 5]; 5], ..Scenario::default() };
        assert!(calibrate_transmissibility(&s).is_err());
    }
}
