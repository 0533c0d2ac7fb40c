//! Deterministic samplers. Every draw comes from the pinned SplitMix64
//! generator, so a (seed, count) pair reproduces exactly anywhere.

use super::empirical::EmpiricalDistribution;
use super::rng::SplitMix64;
use crate::error::StatsError;

/// `count` inverse-CDF draws from an empirical distribution.
pub fn sample_empirical(dist: &EmpiricalDistribution, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| dist.quantile(rng.next_f64())).collect()
}

/// Continuous Pareto draws with density proportional to x^(-alpha) on
/// [x_min, inf): x = x_min (1 - u)^(-1/(alpha-1)).
pub fn sample_pareto_continuous(
    alpha: f64,
    x_min: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>, StatsError> {
    if alpha <= 1.0 {
        return Err(StatsError::NegativeParameter {
            name: "alpha - 1",
            value: alpha - 1.0,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let exponent = -1.0 / (alpha - 1.0);
    Ok((0..count)
        .map(|_| x_min * (1.0 - rng.next_f64()).powf(exponent))
        .collect())
}

/// Zipf(rho, support_n) draws by inverse CDF over the tabulated PMF.
pub fn sample_zipf(
    rho: f64,
    support_n: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<u64>, StatsError> {
    if rho < 0.0 {
        return Err(StatsError::NegativeParameter {
            name: "rho",
            value: rho,
        });
    }
    let cdf = cumulative_table(rho + 1.0, support_n);
    let mut rng = SplitMix64::new(seed);
    Ok((0..count)
        .map(|_| inverse_lookup(&cdf, rng.next_f64()))
        .collect())
}

/// Discrete power-law draws with PMF proportional to x^(-alpha) on
/// 1..=support_n, by the same tabulated inverse CDF.
pub fn sample_discrete_power_law(
    alpha: f64,
    support_n: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<u64>, StatsError> {
    if alpha <= 1.0 {
        return Err(StatsError::NegativeParameter {
            name: "alpha - 1",
            value: alpha - 1.0,
        });
    }
    let cdf = cumulative_table(alpha, support_n);
    let mut rng = SplitMix64::new(seed);
    Ok((0..count)
        .map(|_| inverse_lookup(&cdf, rng.next_f64()))
        .collect())
}

fn cumulative_table(s: f64, support_n: u64) -> Vec<f64> {
    let n = usize::try_from(support_n).expect("support fits in memory");
    let mut table: Vec<f64> = (1..=n).map(|x| (x as f64).powf(-s)).collect();
    let mut running = 0.0;
    for v in &mut table {
        running += *v;
        *v = running;
    }
    let norm = 1.0 / running;
    for v in &mut table {
        *v *= norm;
    }
    table
}

fn inverse_lookup(cdf: &[f64], u: f64) -> u64 {
    (cdf.partition_point(|&c| c < u) + 1).min(cdf.len()) as u64
}
