//! Empirical distribution over positive integer samples: exact counts, ECDF,
//! survival function, quantiles, and degree-set fractions.

use crate::error::StatsError;

/// Non-parametric distribution built from observed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    /// Distinct values, ascending.
    values: Vec<u64>,
    /// Occurrence count per distinct value.
    counts: Vec<u64>,
    /// Cumulative counts (same length as `values`).
    cumulative: Vec<u64>,
    total: u64,
}

/// Build the empirical distribution of a non-empty positive sample.
pub fn build_empirical(samples: &[u64]) -> Result<EmpiricalDistribution, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let mut values = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for &v in &sorted {
        if values.last() == Some(&v) {
            *counts.last_mut().expect("parallel to values") += 1;
        } else {
            values.push(v);
            counts.push(1);
        }
    }
    let mut cumulative = Vec::with_capacity(counts.len());
    let mut running = 0u64;
    for &c in &counts {
        running += c;
        cumulative.push(running);
    }
    Ok(EmpiricalDistribution {
        values,
        counts,
        cumulative,
        total: samples.len() as u64,
    })
}

impl EmpiricalDistribution {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct_values(&self) -> &[u64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn min(&self) -> u64 {
        self.values[0]
    }

    pub fn max(&self) -> u64 {
        *self.values.last().expect("non-empty by construction")
    }

    /// Fraction of samples with value <= x (right-continuous, ends at 1).
    pub fn ecdf(&self, x: u64) -> f64 {
        match self.values.partition_point(|&v| v <= x) {
            0 => 0.0,
            idx => self.cumulative[idx - 1] as f64 / self.total as f64,
        }
    }

    /// Fraction of samples with value > x.
    pub fn survival(&self, x: u64) -> f64 {
        1.0 - self.ecdf(x)
    }

    /// Smallest value whose ECDF reaches u (inverse CDF for u in [0, 1)).
    pub fn quantile(&self, u: f64) -> u64 {
        debug_assert!((0.0..=1.0).contains(&u));
        let target = u * self.total as f64;
        let idx = self
            .cumulative
            .partition_point(|&c| (c as f64) < target)
            .min(self.values.len() - 1);
        self.values[idx]
    }

    /// (value, survival) pairs at every distinct value, for log-log plots.
    pub fn survival_points(&self) -> Vec<(u64, f64)> {
        self.values.iter().map(|&v| (v, self.survival(v))).collect()
    }
}

/// Fraction of nodes at each observed degree, complete over the support,
/// ascending in q.
pub fn degree_set_fractions(degrees: &[u64]) -> Result<Vec<(u64, f64)>, StatsError> {
    let dist = build_empirical(degrees)?;
    let total = dist.total() as f64;
    Ok(dist
        .values
        .iter()
        .zip(&dist.counts)
        .map(|(&v, &c)| (v, c as f64 / total))
        .collect())
}
