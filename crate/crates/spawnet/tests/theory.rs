//! Degree-distribution theory: exact recursion, closed form, asymptote,
//! and the finite-n master equation, cross-checked against each other and
//! against hand-computed values.

use num_rational::BigRational;
use spawnet::special::{big_ratio, hurwitz_zeta, ln_gamma, ln_gamma_ratio};
use spawnet::theory::{
    asymptote_crossover_q, asymptotic_coefficient, degree_pmf_asymptotic, degree_pmf_closed,
    degree_pmf_recursive, degree_pmf_recursive_exact, degree_probability_table, evolve_master,
    p1_stationary, spawn_probability, MasterEvolutionState, CONSTANTS,
};
use spawnet::TheoryError;

#[test]
fn stationary_constants() {
    assert_eq!(p1_stationary(), 3.0 / 7.0);
    assert_eq!(CONSTANTS.a, 1.0);
    assert_eq!(CONSTANTS.mean_degree, 2.0);
    assert_eq!(CONSTANTS.mu, 3.5);
    assert_eq!(CONSTANTS.delta, 3.0 / 7.0);
    assert_eq!(CONSTANTS.alpha, 2.5);
}

#[test]
fn recursion_head_is_exact() {
    let exact = degree_pmf_recursive_exact(3);
    assert_eq!(exact[0], big_ratio(3, 7));
    assert_eq!(exact[1], big_ratio(4, 21));
    assert_eq!(exact[2], big_ratio(8, 77));

    // Ratio law p_q / p_{q-1} = 2q / (2q + 5), exactly.
    let exact = degree_pmf_recursive_exact(50);
    for q in 2..=50i64 {
        let ratio: BigRational = &exact[(q - 1) as usize] / &exact[(q - 2) as usize];
        assert_eq!(ratio, big_ratio(2 * q, 2 * q + 5), "q = {q}");
    }
}

#[test]
fn float_recursion_matches_exact_prefix() {
    let floats = degree_pmf_recursive(20);
    assert!((floats[0] - 3.0 / 7.0).abs() < 1e-16);
    assert!((floats[1] - 4.0 / 21.0).abs() < 1e-16);
    assert!((floats[2] - 8.0 / 77.0).abs() < 1e-16);
    assert!((floats[19] / floats[18] - 40.0 / 45.0).abs() < 1e-14);
}

#[test]
fn closed_form_matches_recursion_to_machine_precision() {
    let recursive = degree_pmf_recursive(1000);
    for q in 1..=1000u32 {
        let r = recursive[(q - 1) as usize];
        let c = degree_pmf_closed(q);
        let rel = ((c - r) / r).abs();
        assert!(
            rel <= 1e-12,
            "q = {q}: closed {c:e} vs recursive {r:e}, rel err {rel:e}"
        );
    }
}

#[test]
fn closed_form_stays_accurate_far_out() {
    let c = degree_pmf_closed(5000);
    assert!(c.is_finite() && c > 0.0);
    let ratio = c / degree_pmf_asymptotic(5000);
    assert!((ratio - 1.0).abs() < 0.005, "ratio {ratio}");
}

#[test]
fn asymptote_ratio_rises_monotonically_to_one() {
    let ratio = |q: u32| degree_pmf_closed(q) / degree_pmf_asymptotic(q);
    assert!((ratio(10) - 0.6709).abs() < 1e-4);
    assert!((ratio(100) - 0.9576).abs() < 1e-4);
    assert!((ratio(435) - 0.990016).abs() < 1e-5);
    assert!((ratio(1000) - 0.99564).abs() < 1e-5);
    assert!((ratio(10_000) - 0.999563).abs() < 1e-6);

    let mut prev = 0.0;
    for q in 1..=2000 {
        let r = ratio(q);
        assert!(r > prev && r < 1.0, "q = {q}: ratio {r} after {prev}");
        prev = r;
    }
}

#[test]
fn crossover_into_one_percent_band() {
    assert_eq!(asymptote_crossover_q(0.01), 435);
    let ratio = |q: u32| degree_pmf_closed(q) / degree_pmf_asymptotic(q);
    assert!((ratio(434) - 1.0).abs() > 0.01);
    assert!((ratio(435) - 1.0).abs() <= 0.01);
}

#[test]
fn asymptotic_coefficient_value() {
    // 45 sqrt(pi) / 16, equivalently mu * delta * Gamma(mu) at mu = 7/2.
    let coefficient = asymptotic_coefficient();
    assert!((coefficient - 4.985026455671764).abs() < 1e-12);
    let via_gamma = 3.5 * (3.0 / 7.0) * ln_gamma(3.5).exp();
    assert!((coefficient - via_gamma).abs() < 1e-13);
}

#[test]
fn spawn_probability_values() {
    assert_eq!(spawn_probability(1, 2), 1.0 / 3.0);
    assert_eq!(spawn_probability(5, 100), 0.02);
    // The stationary law has mean degree exactly 5 (the Beta-integral
    // identity gives sum q p_q = (45 sqrt(pi)/16) Gamma(1/2)/Gamma(5/2)^2
    // = 5), so sum (q+1) p_q = 6. The q p_q tail decays as q^(-3/2), so
    // truncated sums crawl toward 6 from below.
    let n = 1_000u64;
    let truncated_rate = |q_max: u32| -> f64 {
        degree_pmf_recursive(q_max)
            .iter()
            .enumerate()
            .map(|(i, p)| p * spawn_probability((i + 1) as u32, n))
            .sum()
    };
    let coarse = truncated_rate(4_000) * 3.0 * n as f64;
    let finer = truncated_rate(16_000) * 3.0 * n as f64;
    assert!(coarse > 5.8 && coarse < 6.0, "coarse {coarse}");
    assert!(finer > coarse && finer < 6.0, "finer {finer}");
}

#[test]
fn probability_mass_sums_toward_one() {
    let pmf = degree_pmf_recursive(1000);
    let total: f64 = pmf.iter().sum();
    assert!(total > 0.999 && total < 1.0, "partial mass {total}");
}

#[test]
fn tail_log_slope_matches_exponent() {
    let pmf = degree_pmf_recursive(1000);
    let slope = (pmf[999].ln() - pmf[799].ln()) / (1000f64.ln() - 800f64.ln());
    assert!((slope + 2.5).abs() < 0.01, "slope {slope}");
}

#[test]
fn probability_table_is_consistent() {
    let table = degree_probability_table(64);
    assert_eq!(table.rows.len(), 64);
    for (i, row) in table.rows.iter().enumerate() {
        assert_eq!(row.q as usize, i + 1);
        assert!((row.p_closed - row.p_recursive).abs() <= 1e-12 * row.p_recursive);
        assert_eq!(row.p_asymptotic, degree_pmf_asymptotic(row.q));
    }
    assert_eq!(table.rows[0].p_recursive, 3.0 / 7.0);
}

#[test]
fn log_gamma_agrees_with_exact_factorials() {
    for n in 1..=20u32 {
        let exact: f64 = (1..n).map(f64::from).map(f64::ln).sum();
        assert!((ln_gamma(f64::from(n)) - exact).abs() < 1e-12 * exact.max(1.0));
    }
    // Ratio form against direct differences where both are trustworthy.
    for q in [1u32, 2, 5, 10, 50] {
        let direct = ln_gamma(1.0 + f64::from(q)) - ln_gamma(3.5 + f64::from(q));
        let ratio = ln_gamma_ratio(1.0 + f64::from(q), 2.5);
        assert!((direct - ratio).abs() < 1e-12);
    }
}

#[test]
fn hurwitz_zeta_spot_values() {
    // zeta(2) = pi^2 / 6 and zeta(2, 2) = zeta(2) - 1.
    let z2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    assert!((hurwitz_zeta(2.0, 1.0) - z2).abs() < 1e-12);
    assert!((hurwitz_zeta(2.0, 2.0) - (z2 - 1.0)).abs() < 1e-12);
    // zeta(4) = pi^4 / 90.
    let z4 = std::f64::consts::PI.powi(4) / 90.0;
    assert!((hurwitz_zeta(4.0, 1.0) - z4).abs() < 1e-12);
}

#[test]
fn master_two_steps_exact() {
    // Two hand-computed updates from the cold start p_1 = 1 at n = 2:
    //   n=2 -> 3: p = [5/9, 4/9]
    //   n=3 -> 4: p = [13/27, 8/27, 6/27]
    let state = MasterEvolutionState::new(8).expect("state");
    let state = evolve_master(state, 4).expect("evolve");
    assert_eq!(state.n, 4);
    assert!((state.p_q(1) - 13.0 / 27.0).abs() < 1e-15);
    assert!((state.p_q(2) - 8.0 / 27.0).abs() < 1e-15);
    assert!((state.p_q(3) - 6.0 / 27.0).abs() < 1e-15);
    assert!((state.total_mass() - 1.0).abs() < 1e-15);
    assert_eq!(state.overflow_mass, 0.0);
}

#[test]
fn master_converges_to_stationary_law() {
    let state = MasterEvolutionState::new(10_000).expect("state");
    let mut state = state;
    for checkpoint in [1_000u64, 10_000, 100_000] {
        state = evolve_master(state, checkpoint).expect("evolve");
        let drift = (state.total_mass() - 1.0).abs();
        assert!(drift <= 1e-12, "n = {checkpoint}: mass drift {drift:e}");
    }
    assert_eq!(state.n, 100_000);

    // Head converges fast; the whole law follows the exact recursion.
    assert!((state.p_q(1) - 3.0 / 7.0).abs() < 1e-6);
    let recursive = degree_pmf_recursive(10_000);
    let l1: f64 = (1..=10_000)
        .map(|q| (state.p_q(q) - recursive[q - 1]).abs())
        .sum();
    assert!(l1 < 1e-3, "L1 distance {l1:e}");

    for q in 1..10 {
        assert!(state.p_q(q) > state.p_q(q + 1));
    }
    assert!(state.overflow_mass >= 0.0 && state.overflow_mass < 1e-5);
}

#[test]
fn master_error_paths() {
    assert!(matches!(
        MasterEvolutionState::new(0),
        Err(TheoryError::EmptySupport)
    ));

    let state = MasterEvolutionState::new(8).expect("state");
    assert!(matches!(
        evolve_master(state, 2),
        Err(TheoryError::TargetNotAhead {
            current: 2,
            target: 2,
        })
    ));

    // Corrupting the stored mass trips the conservation guard at the next
    // renormalization pass.
    let mut state = MasterEvolutionState::new(8).expect("state");
    state.p[0] = 5.0;
    match evolve_master(state, 1000) {
        Err(TheoryError::NormalizationDrift { n, drift }) => {
            assert_eq!(n, 64);
            assert!(drift > 1e-9);
        }
        other => panic!("expected NormalizationDrift, got {other:?}"),
    }
}
