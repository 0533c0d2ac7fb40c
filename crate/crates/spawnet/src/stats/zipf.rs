//! Zipf distribution over a finite support: PMF and maximum-likelihood
//! estimation of the exponent by bracketed bisection on the score function.

use crate::error::StatsError;
use serde::Serialize;

const RHO_HI: f64 = 64.0;
const TOLERANCE: f64 = 1e-6;
const MAX_ITERATIONS: usize = 200;

/// Fitted Zipf distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZipfFit {
    pub rho: f64,
    pub support_n: u64,
    pub log_likelihood: f64,
    /// Set when the sample has zero spread, which pushes rho to the search
    /// bound instead of a genuine maximum.
    pub degenerate: bool,
}

/// Zipf PMF: x^(-(rho+1)) / Σ_{i=1..n} i^(-(rho+1)).
pub fn zipf_pmf(x: u64, rho: f64, support_n: u64) -> Result<f64, StatsError> {
    if rho < 0.0 {
        return Err(StatsError::NegativeParameter {
            name: "rho",
            value: rho,
        });
    }
    if x < 1 || x > support_n {
        return Err(StatsError::OutOfSupport {
            value: x,
            support_n,
        });
    }
    let s = rho + 1.0;
    Ok((x as f64).powf(-s) / zipf_normalizer(s, support_n))
}

/// Σ_{i=1..n} i^(-s), compensated summation.
fn zipf_normalizer(s: f64, support_n: u64) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for i in 1..=support_n {
        let v = (i as f64).powf(-s);
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Expected ln(i) under a Zipf law with weight i^(-s) on 1..=n.
fn expected_log(s: f64, support_n: u64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..=support_n {
        let w = (i as f64).powf(-s);
        num += w * (i as f64).ln();
        den += w;
    }
    num / den
}

/// Maximum-likelihood Zipf fit by bisection on the monotone score
/// d/d rho log L = -Σ ln x + m E[ln i], to tolerance 1e-6 on rho.
///
/// `support_n` defaults to the largest observed value.
pub fn fit_zipf_mle(samples: &[u64], support_n: Option<u64>) -> Result<ZipfFit, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let max_seen = *samples.iter().max().expect("non-empty");
    let n = support_n.unwrap_or(max_seen);
    if max_seen > n || samples.iter().any(|&x| x < 1) {
        return Err(StatsError::OutOfSupport {
            value: max_seen,
            support_n: n,
        });
    }
    let m = samples.len() as f64;
    let mean_log: f64 = samples.iter().map(|&x| (x as f64).ln()).sum::<f64>() / m;
    let single_valued = samples.iter().all(|&x| x == samples[0]);

    // score(rho) = E_rho[ln i] - mean_log, strictly decreasing in rho.
    let score = |rho: f64| expected_log(rho + 1.0, n) - mean_log;

    let finish = |rho: f64, degenerate: bool| {
        let s = rho + 1.0;
        let log_norm = zipf_normalizer(s, n).ln();
        let log_likelihood = -s * mean_log * m - m * log_norm;
        ZipfFit {
            rho,
            support_n: n,
            log_likelihood,
            degenerate,
        }
    };

    if score(0.0) <= 0.0 {
        // Sample is flatter than rho = 0 allows.
        return Ok(finish(0.0, single_valued));
    }
    if score(RHO_HI) > 0.0 {
        // Zero spread (or nearly): likelihood increases without bound.
        return Ok(finish(RHO_HI, true));
    }
    let mut lo = 0.0f64;
    let mut hi = RHO_HI;
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if score(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < TOLERANCE {
            return Ok(finish(0.5 * (lo + hi), single_valued));
        }
    }
    Err(StatsError::NonConvergence {
        iterations: MAX_ITERATIONS,
        tolerance: TOLERANCE,
    })
}
