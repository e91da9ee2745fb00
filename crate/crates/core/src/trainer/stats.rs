//! Binomial log-likelihood kernels shared by the three detectors.

use crate::error::{Error, Result};

pub const PROB_CLAMP: f64 = 1e-12;

fn clamp(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `k ln p + (n - k) ln(1 - p)`, with `p` clamped away from 0 and 1.
pub fn log_likelihood(k: u64, n: u64, p: f64) -> Result<f64> {
    if k > n {
        return Err(Error::Precondition(format!("log_likelihood: k={k} exceeds n={n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("log_likelihood: p={p} outside [0, 1]")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let p = clamp(p);
    Ok(k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln())
}

/// Dunning's log-likelihood ratio for the association of a first event
/// (count `c1`) with a second (count `c2`) that co-occur `c12` times among
/// `n` trials. The null hypothesis is independence; the alternative gives the
/// second event a separate rate inside and outside the first.
pub fn pair_llr(c1: u64, c2: u64, c12: u64, n: u64) -> Result<f64> {
    if n == 0 || c12 > c1 || c12 > c2 || c1 > n || c2 > n || c2 - c12 > n - c1 {
        return Err(Error::Precondition(format!(
            "pair_llr: inconsistent counts c1={c1} c2={c2} c12={c12} n={n}"
        )));
    }
    let p = ratio(c2, n);
    let p1 = ratio(c12, c1);
    let p2 = ratio(c2 - c12, n - c1);
    let alt = log_likelihood(c12, c1, p1)? + log_likelihood(c2 - c12, n - c1, p2)?;
    let null = log_likelihood(c12, c1, p)? + log_likelihood(c2 - c12, n - c1, p)?;
    Ok(2.0 * (alt - null))
}
