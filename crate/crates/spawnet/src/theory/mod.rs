//! Analytic degree distribution of the spawning process, evaluated three
//! ways — exact recursion, Gamma-function closed form, and the q^(-5/2)
//! power-law asymptote — plus the finite-n master equation.

mod master;

pub use master::{evolve_master, MasterEvolutionState};

use crate::special::{big_ratio, ln_gamma, ln_gamma_ratio, rational_to_f64};
use num_rational::BigRational;

/// Fixed constants of the stationary theory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    /// Additive attachment constant.
    pub a: f64,
    /// Mean degree of a tree.
    pub mean_degree: f64,
    /// Gamma-form shape parameter, 7/2.
    pub mu: f64,
    /// Head value, 3/7.
    pub delta: f64,
    /// Asymptotic tail exponent, 5/2.
    pub alpha: f64,
}

pub const CONSTANTS: TheoryConstants = TheoryConstants {
    a: 1.0,
    mean_degree: 2.0,
    mu: 3.5,
    delta: 3.0 / 7.0,
    alpha: 2.5,
};

/// One row of the three-way degree probability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeProbabilityRow {
    pub q: u32,
    pub p_recursive: f64,
    pub p_closed: f64,
    pub p_asymptotic: f64,
}

/// Degree probabilities by all three methods for q = 1..=q_max.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProbabilityTable {
    pub rows: Vec<DegreeProbabilityRow>,
}

/// Stationary probability of degree 1: exactly 3/7, the fixed point of
/// p1 = 1 - (4/3) p1.
pub fn p1_stationary() -> f64 {
    3.0 / 7.0
}

/// Exact-rational stationary PMF via the ratio recursion
/// p_q = q / (5/2 + q) * p_{q-1}, with p_1 = 3/7.
pub fn degree_pmf_recursive_exact(q_max: u32) -> Vec<BigRational> {
    assert!(q_max >= 1);
    let mut values = Vec::with_capacity(q_max as usize);
    let mut p = big_ratio(3, 7);
    values.push(p.clone());
    for q in 2..=i64::from(q_max) {
        // q / (5/2 + q) = 2q / (5 + 2q)
        p *= big_ratio(2 * q, 5 + 2 * q);
        values.push(p.clone());
    }
    values
}

/// Stationary PMF by recursion, as floats (exact values converted once).
pub fn degree_pmf_recursive(q_max: u32) -> Vec<f64> {
    // Exact rationals up to q = 1000 prove the algebra; beyond that the
    // denominators grow into the thousands of digits, so continue the same
    // one-step ratio in floating point.
    const EXACT_LIMIT: u32 = 1000;
    let exact_upto = q_max.min(EXACT_LIMIT);
    let mut values: Vec<f64> = degree_pmf_recursive_exact(exact_upto)
        .iter()
        .map(rational_to_f64)
        .collect();
    let mut p = *values.last().expect("q_max >= 1");
    for q in (EXACT_LIMIT + 1)..=q_max {
        p *= f64::from(2 * q) / f64::from(5 + 2 * q);
        values.push(p);
    }
    values
}

/// Closed-form stationary PMF: mu * delta * Gamma(1+q) Gamma(mu) / Gamma(mu+q),
/// evaluated in the log domain so large q neither overflows nor cancels.
pub fn degree_pmf_closed(q: u32) -> f64 {
    assert!(q >= 1);
    let qf = f64::from(q);
    CONSTANTS.mu
        * CONSTANTS.delta
        * (ln_gamma(CONSTANTS.mu) + ln_gamma_ratio(1.0 + qf, CONSTANTS.mu - 1.0)).exp()
}

/// Power-law asymptote (45 sqrt(pi) / 16) q^(-5/2).
pub fn degree_pmf_asymptotic(q: u32) -> f64 {
    assert!(q >= 1);
    asymptotic_coefficient() * f64::from(q).powf(-CONSTANTS.alpha)
}

/// The asymptote's coefficient, 45 sqrt(pi) / 16.
pub fn asymptotic_coefficient() -> f64 {
    45.0 * std::f64::consts::PI.sqrt() / 16.0
}

/// Probability that a node of degree q spawns while the population grows
/// from n to n+1 nodes: (q + 1) / (3n).
pub fn spawn_probability(q: u32, n: u64) -> f64 {
    assert!(q >= 1 && n >= 2);
    f64::from(q + 1) / (3.0 * n as f64)
}

/// All three methods tabulated for q = 1..=q_max.
pub fn degree_probability_table(q_max: u32) -> DegreeProbabilityTable {
    let recursive = degree_pmf_recursive(q_max);
    let rows = (1..=q_max)
        .map(|q| DegreeProbabilityRow {
            q,
            p_recursive: recursive[(q - 1) as usize],
            p_closed: degree_pmf_closed(q),
            p_asymptotic: degree_pmf_asymptotic(q),
        })
        .collect();
    DegreeProbabilityTable { rows }
}

/// First q at which closed / asymptotic enters [1 - tol, 1 + tol]; the
/// convergence of the tail toward the pure power law.
pub fn asymptote_crossover_q(tol: f64) -> u32 {
    assert!(tol > 0.0);
    let mut q = 1u32;
    loop {
        let ratio = degree_pmf_closed(q) / degree_pmf_asymptotic(q);
        if (ratio - 1.0).abs() <= tol {
            return q;
        }
        q += 1;
    }
}
