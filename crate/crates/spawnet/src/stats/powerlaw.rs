//! Power-law tail fitting: maximum-likelihood exponent estimates with a
//! Kolmogorov-Smirnov goodness statistic, and the x_min scan that picks the
//! lower cutoff by minimizing that statistic.

use crate::error::StatsError;
use crate::special::hurwitz_zeta;
use serde::Serialize;

const MIN_TAIL: usize = 50;
const MIN_SCAN: usize = 100;
const MAX_SCAN_CANDIDATES: usize = 256;

/// Which likelihood the exponent estimate used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Integer samples: corrected estimator 1 + m / Σ ln(x / (x_min - 1/2)).
    Discrete,
    /// Real-valued samples: 1 + m / Σ ln(x / x_min).
    Continuous,
}

/// One candidate of an x_min scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub x_min: f64,
    pub alpha: f64,
    pub ks_distance: f64,
    pub tail_count: u64,
}

/// Fitted power-law tail p(x) ∝ x^(-alpha) for x >= x_min.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: f64,
    pub ks_distance: f64,
    /// Normalization constant implied by (alpha, x_min).
    pub normalization: f64,
    pub tail_count: u64,
    pub mode: FitMode,
    /// Full scan curve when produced by `scan_xmin`, empty otherwise.
    pub scan_curve: Vec<ScanPoint>,
}

/// Maximum-likelihood power-law fit of the tail at a fixed cutoff.
///
/// Integer samples use the half-shift corrected discrete estimator; any
/// non-integral sample switches the fit (and its KS statistic) to the
/// continuous form. The corrected discrete form is only meaningful for
/// cutoffs above 1 — on integer data at x_min = 1 its value is bounded by
/// 1 + 1/ln 2, so recovering steeper exponents there requires real-valued
/// samples, which take the continuous path automatically.
pub fn fit_power_law_mle(samples: &[f64], x_min: f64) -> Result<PowerLawFit, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut tail: Vec<f64> = samples.iter().copied().filter(|&x| x >= x_min).collect();
    tail.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    fit_sorted_tail(&tail, x_min)
}

/// Scan x_min over the sample support, fit each candidate tail, and keep the
/// cutoff minimizing the KS distance. The whole scan curve rides along in
/// the result for inspection — the estimate is known to be unstable in the
/// cutoff, so the minimizer alone is not trustworthy.
pub fn scan_xmin(samples: &[f64]) -> Result<PowerLawFit, StatsError> {
    if samples.len() < MIN_SCAN {
        return Err(StatsError::TooFewSamples {
            needed: MIN_SCAN,
            got: samples.len(),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let mut distinct = sorted.clone();
    distinct.dedup();
    // Every distinct value whose tail is still large enough is a candidate;
    // only when that set is enormous (continuous data, where nearly every
    // sample is distinct) is it thinned to an evenly spaced subset.
    let eligible_end = distinct
        .partition_point(|&v| sorted.len() - sorted.partition_point(|&s| s < v) >= MIN_TAIL);
    let eligible = &distinct[..eligible_end];
    let mut candidates: Vec<f64> = if eligible.len() <= MAX_SCAN_CANDIDATES {
        eligible.to_vec()
    } else {
        (0..MAX_SCAN_CANDIDATES)
            .map(|i| eligible[i * (eligible.len() - 1) / (MAX_SCAN_CANDIDATES - 1)])
            .collect()
    };
    candidates.dedup();

    let mut curve = Vec::new();
    let mut best: Option<PowerLawFit> = None;
    for &x_min in &candidates {
        let start = sorted.partition_point(|&v| v < x_min);
        let fit = match fit_sorted_tail(&sorted[start..], x_min) {
            Ok(fit) => fit,
            Err(StatsError::Degenerate) => continue,
            Err(e) => return Err(e),
        };
        curve.push(ScanPoint {
            x_min,
            alpha: fit.alpha,
            ks_distance: fit.ks_distance,
            tail_count: fit.tail_count,
        });
        if best
            .as_ref()
            .is_none_or(|b| fit.ks_distance < b.ks_distance)
        {
            best = Some(fit);
        }
    }
    let mut best = best.ok_or(StatsError::Degenerate)?;
    best.scan_curve = curve;
    Ok(best)
}

fn fit_sorted_tail(tail: &[f64], x_min: f64) -> Result<PowerLawFit, StatsError> {
    if tail.len() < MIN_TAIL {
        return Err(StatsError::TooFewTailSamples {
            needed: MIN_TAIL,
            got: tail.len(),
            x_min,
        });
    }
    if tail[0] == tail[tail.len() - 1] {
        // Zero spread: the likelihood pushes alpha to infinity.
        return Err(StatsError::Degenerate);
    }
    let m = tail.len() as f64;
    let discrete = x_min.fract() == 0.0 && x_min >= 1.0 && tail.iter().all(|&x| x.fract() == 0.0);
    let shift = if discrete { x_min - 0.5 } else { x_min };
    let log_sum: f64 = tail.iter().map(|&x| (x / shift).ln()).sum();
    if log_sum <= 0.0 {
        return Err(StatsError::Degenerate);
    }
    let alpha = 1.0 + m / log_sum;
    if !alpha.is_finite() {
        return Err(StatsError::Degenerate);
    }
    let (ks, normalization) = if discrete {
        (
            ks_discrete(tail, x_min, alpha),
            1.0 / hurwitz_zeta(alpha, x_min),
        )
    } else {
        (
            ks_continuous(tail, x_min, alpha),
            (alpha - 1.0) * x_min.powf(alpha - 1.0),
        )
    };
    Ok(PowerLawFit {
        alpha,
        x_min,
        ks_distance: ks,
        normalization,
        tail_count: tail.len() as u64,
        mode: if discrete {
            FitMode::Discrete
        } else {
            FitMode::Continuous
        },
        scan_curve: Vec::new(),
    })
}

/// KS distance between the empirical tail and the fitted discrete power law
/// (normalized by the Hurwitz zeta function at the cutoff). Both CDFs have
/// atoms at the integers, so the distance is taken at the observed values'
/// step tops — the discrete convention, unlike the continuous case where
/// the supremum needs both corners of each empirical step.
fn ks_discrete(sorted_tail: &[f64], x_min: f64, alpha: f64) -> f64 {
    let m = sorted_tail.len() as f64;
    let z0 = hurwitz_zeta(alpha, x_min);
    let mut ks: f64 = 0.0;
    let mut partial = 0.0;
    let mut next_k = x_min;
    let mut i = 0usize;
    while i < sorted_tail.len() {
        let x = sorted_tail[i];
        let mut j = i;
        while j < sorted_tail.len() && sorted_tail[j] == x {
            j += 1;
        }
        // Model CDF at x: the running partial sum of k^-alpha over z0.
        while next_k <= x {
            partial += next_k.powf(-alpha);
            next_k += 1.0;
        }
        let model = partial / z0;
        let emp = j as f64 / m;
        ks = ks.max((emp - model).abs());
        i = j;
    }
    ks
}

/// KS distance against the continuous power-law CDF
/// F(x) = 1 - (x / x_min)^(1 - alpha).
fn ks_continuous(sorted_tail: &[f64], x_min: f64, alpha: f64) -> f64 {
    let m = sorted_tail.len() as f64;
    let mut ks: f64 = 0.0;
    for (i, &x) in sorted_tail.iter().enumerate() {
        let model = 1.0 - (x / x_min).powf(1.0 - alpha);
        let emp_lo = i as f64 / m;
        let emp_hi = (i + 1) as f64 / m;
        ks = ks.max((emp_lo - model).abs()).max((emp_hi - model).abs());
    }
    ks
}
