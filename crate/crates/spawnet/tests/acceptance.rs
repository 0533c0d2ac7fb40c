//! Acceptance gate: eleven numbered criteria covering the generator, the
//! theory engine, the estimators, and the serialization layer. Each test
//! prints exactly one `criterion NN PASS/FAIL: ...` line (visible with
//! `--nocapture`; on failure the same line is the panic message).
//!
//! Criterion 4 is expected to fail: the degree-2 fraction of this process
//! is 3/13 ≈ 0.231 at scale, which no correct implementation can bring
//! inside the required 0.07 ± 0.03 band. The neighbouring degree-3
//! fraction does land in that band, so the bound appears to have been
//! recorded against the wrong degree. The test states the requirement
//! faithfully and is left red rather than loosened.

use spawnet::engine::{run, run_event_driven, run_sweep, RoundingRule, SimConfig, SimResult};
use spawnet::io::{read_run, write_run, EVENTS_FILE};
use spawnet::special::big_ratio;
use spawnet::stats::{
    births_summary, degree_set_fractions, degree_two_series, fit_power_law_mle, fit_zipf_mle,
    node_count_series, sample_pareto_continuous, sample_zipf, scan_xmin, FitMode,
    ZIPF_REFERENCE_CANDIDATES,
};
use spawnet::theory::{
    asymptote_crossover_q, degree_pmf_asymptotic, degree_pmf_closed, degree_pmf_recursive,
    degree_pmf_recursive_exact, evolve_master, p1_stationary, MasterEvolutionState,
};
use spawnet::ExportError;
use std::fs;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const MILLION: u64 = 1_000_000;

/// The shared million-node reference run (default ceiling rule,
/// event-driven engine), with its wall-clock build time.
fn big_run() -> &'static (SimResult, Duration) {
    static BIG: OnceLock<(SimResult, Duration)> = OnceLock::new();
    BIG.get_or_init(|| {
        let config = SimConfig::with_max_nodes(MILLION);
        let start = Instant::now();
        let result = run(&config).expect("million-node run");
        (result, start.elapsed())
    })
}

/// Print the criterion's verdict line and enforce it.
fn criterion(number: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {number:02} {verdict}: {detail}");
    println!("{line}");
    assert!(pass, "{line}");
}

fn fraction_of(fractions: &[(u64, f64)], q: u64) -> f64 {
    fractions
        .iter()
        .find(|&&(degree, _)| degree == q)
        .map_or(0.0, |&(_, f)| f)
}

#[test]
fn c01_exact_spawn_schedule() {
    let result = run(&SimConfig::with_max_ticks(54)).expect("run");
    let ticks_of = |parent: u32| -> Vec<u64> {
        result
            .events
            .iter()
            .filter(|e| e.parent_id == parent)
            .map(|e| e.tick)
            .collect()
    };

    let node1 = ticks_of(1);
    let expected1: Vec<u64> = (1..=18).map(|n| 3 * n).collect();
    let node2 = ticks_of(2);
    let first_four = node2.get(..4).unwrap_or(&[]);

    let pass = node1 == expected1 && first_four == [4, 8, 12, 16];
    criterion(
        1,
        pass,
        &format!(
            "node 1 spawned at {:?}.. (every multiple of 3 through 54: {}), \
             node 2 first spawned at {:?} (required 4, 8, 12, 16)",
            &node1[..node1.len().min(4)],
            node1 == expected1,
            first_four,
        ),
    );
}

#[test]
fn c02_tree_degree_invariant_at_scale() {
    let (result, elapsed) = big_run();
    let n = result.node_count();
    let degree_sum = result.degree_sum();
    let expected = 2 * (n - 1);
    let in_time = *elapsed < Duration::from_secs(60);

    // The run overshoots the ceiling by the final tick's bolus, so the
    // target invariant is the adjusted 2(N-1); the exact population is
    // pinned to catch any drift in the stop condition.
    let pass = degree_sum == expected && n == 1_011_331 && in_time;
    criterion(
        2,
        pass,
        &format!(
            "degree sum {degree_sum} == 2(N-1) = {expected} at N = {n} \
             (event-driven build took {:.2?}, limit 60s)",
            elapsed
        ),
    );
}

#[test]
fn c03_final_tick_range() {
    let (result, _) = big_run();
    let final_tick = result.final_tick;
    let pass = (24_000..=40_000).contains(&final_tick) && final_tick == 30_720;
    criterion(
        3,
        pass,
        &format!("million-node run finished at tick {final_tick} (required range [24000, 40000])"),
    );
}

#[test]
fn c04_degree_set_fractions() {
    let (result, _) = big_run();
    let degrees: Vec<u64> = result.degrees().iter().map(|&d| u64::from(d)).collect();
    let fractions = degree_set_fractions(&degrees).expect("fractions");
    let f1 = fraction_of(&fractions, 1);
    let f2 = fraction_of(&fractions, 2);
    let f3 = fraction_of(&fractions, 3);

    let f1_ok = (f1 - 0.60).abs() <= 0.05;
    let f2_ok = (f2 - 0.07).abs() <= 0.03;
    criterion(
        4,
        f1_ok && f2_ok,
        &format!(
            "fraction(q=1) = {f1:.5} ({}; band 0.60 +/- 0.05), \
             fraction(q=2) = {f2:.5} ({}; band 0.07 +/- 0.03). \
             The q=2 fraction of this process converges near 3/13 = 0.2308 and cannot \
             reach the band; the neighbouring fraction(q=3) = {f3:.5} does lie inside \
             0.07 +/- 0.03, so the band appears to target the wrong degree. \
             Left red deliberately; see the decisions ledger.",
            if f1_ok { "ok" } else { "out of band" },
            if f2_ok { "ok" } else { "out of band" },
        ),
    );
}

#[test]
fn c05_growth_exponents() {
    let (result, _) = big_run();

    // Fit from t = 100 up: the first decades mix in the transient before
    // the power-law regime settles.
    let from = |ticks: &[u64], values: &[f64]| -> (Vec<u64>, Vec<f64>) {
        let start = ticks.partition_point(|&t| t < 100);
        (ticks[start..].to_vec(), values[start..].to_vec())
    };

    let (ticks, counts) = node_count_series(result);
    let (ticks, counts) = from(&ticks, &counts);
    let total = spawnet::stats::fit_growth_power_law(&ticks, &counts).expect("total fit");

    let (ticks2, sizes) = degree_two_series(result);
    let (ticks2, sizes) = from(&ticks2, &sizes);
    let deg2 = spawnet::stats::fit_growth_power_law(&ticks2, &sizes).expect("degree-2 fit");

    let total_ok = (total.exponent - 1.46).abs() <= 0.15;
    let deg2_ok = (deg2.exponent - 1.47).abs() <= 0.15;
    criterion(
        5,
        total_ok && deg2_ok,
        &format!(
            "total-count exponent {:.4} (band 1.46 +/- 0.15, r^2 {:.5}), \
             degree-2 exponent {:.4} (band 1.47 +/- 0.15, r^2 {:.5})",
            total.exponent, total.r_squared, deg2.exponent, deg2.r_squared,
        ),
    );
}

#[test]
fn c06_births_per_tick() {
    let (result, _) = big_run();
    let full = births_summary(&result.births_per_tick, None).expect("full summary");
    let window = births_summary(&result.births_per_tick, Some((1000, 5000))).expect("window");

    let mean_ok = (full.mean - 32.0).abs() <= 8.0;
    let window_ok = window.zero_ticks >= 1 && window.max >= 100;

    // The t=53/54 signature under the default ceiling rule; the series is
    // dense from tick 3, so the offset indexes directly.
    let births_at = |r: &SimResult, t: u64| r.births_per_tick[(t - 3) as usize].1;
    let ceiling_ok = births_at(result, 53) == 0 && births_at(result, 54) >= 4;
    let (signature_ok, rule_used) = if ceiling_ok {
        (true, "ceiling (default)")
    } else {
        // Fallback permitted: try the floor rule and document which passed.
        let mut config = SimConfig::with_max_ticks(54);
        config.rounding_rule = RoundingRule::Floor;
        let floor_run = run(&config).expect("floor run");
        let floor_ok = births_at(&floor_run, 53) == 0 && births_at(&floor_run, 54) >= 4;
        (floor_ok, "floor (fallback)")
    };

    criterion(
        6,
        mean_ok && window_ok && signature_ok,
        &format!(
            "full-run mean {:.3} (band 32 +/- 8, std {:.1}), window [1000, 5000] has \
             {} zero-birth ticks and max {} (needs >=1 and >=100); births(53) = 0 and \
             births(54) >= 4 hold under the {} rule",
            full.mean, full.std_dev, window.zero_ticks, window.max, rule_used,
        ),
    );
}

#[test]
fn c07_theory_cross_checks() {
    // Head value, exactly.
    let head_exact = degree_pmf_recursive_exact(1)[0] == big_ratio(3, 7);
    let head_float = p1_stationary() == 3.0 / 7.0;

    // Recursion vs closed form, relative, up to q = 1000.
    let recursive = degree_pmf_recursive(1000);
    let mut worst_rel = 0.0f64;
    for q in 1..=1000u32 {
        let r = recursive[(q - 1) as usize];
        let c = degree_pmf_closed(q);
        worst_rel = worst_rel.max(((c - r) / r).abs());
    }
    let forms_agree = worst_rel <= 1e-12;

    // Closed / asymptotic enters the 1% band exactly at the pinned q*.
    let q_star = asymptote_crossover_q(0.01);
    let ratio = degree_pmf_closed(q_star) / degree_pmf_asymptotic(q_star);
    let crossover_ok = q_star == 435 && (ratio - 1.0).abs() <= 0.01;

    // Master equation to n = 10^6.
    let start = Instant::now();
    let state = MasterEvolutionState::new(10_000).expect("state");
    let state = evolve_master(state, MILLION).expect("evolution");
    let elapsed = start.elapsed();
    let p1 = state.p[0];
    let master_ok = (p1 - 3.0 / 7.0).abs() <= 1e-3 && elapsed < Duration::from_secs(30);

    criterion(
        7,
        head_exact && head_float && forms_agree && crossover_ok && master_ok,
        &format!(
            "p_1 = 3/7 exactly ({head_exact}), recursion vs closed form worst relative \
             error {worst_rel:.2e} up to q=1000 (limit 1e-12), closed/asymptotic ratio \
             {ratio:.5} at pinned q* = {q_star} (expected 435), master equation reached \
             p_1 = {p1:.7} at n = 10^6 (|delta| = {:.2e}, limit 1e-3) in {elapsed:.2?}",
            (p1 - 3.0 / 7.0).abs(),
        ),
    );
}

#[test]
fn c08_tail_exponent_estimates() {
    let (result, _) = big_run();
    let degrees: Vec<u64> = result.degrees().iter().map(|&d| u64::from(d)).collect();

    let samples: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    let power = scan_xmin(&samples).expect("scan");
    let alpha_ok = (2.3..=2.7).contains(&power.alpha);

    let zipf = fit_zipf_mle(&degrees, None).expect("zipf fit");
    let rho_ok = (1.2..=1.6).contains(&zipf.rho) && !zipf.degenerate;

    criterion(
        8,
        alpha_ok && rho_ok,
        &format!(
            "scanned power-law fit alpha = {:.4} at x_min = {} with KS {:.4} over \
             {} tail samples (band [2.3, 2.7]; theory 2.5); Zipf rho = {:.4} on \
             support {} (band [1.2, 1.6]; reference candidates {:?})",
            power.alpha,
            power.x_min,
            power.ks_distance,
            power.tail_count,
            zipf.rho,
            zipf.support_n,
            ZIPF_REFERENCE_CANDIDATES,
        ),
    );
}

#[test]
fn c09_estimator_self_consistency() {
    const DRAWS: usize = 100_000;
    let mut detail = String::new();
    let mut pass = true;

    for seed in [12345u64, 7, 99] {
        let samples = sample_pareto_continuous(2.5, 1.0, DRAWS, seed).expect("pareto");
        let fit = fit_power_law_mle(&samples, 1.0).expect("fit");
        let ok = fit.mode == FitMode::Continuous && (fit.alpha - 2.5).abs() <= 0.05;
        pass &= ok;
        detail.push_str(&format!("alpha(seed {seed}) = {:.4}, ", fit.alpha));
    }
    for seed in [777u64, 8, 100] {
        let samples = sample_zipf(1.5, 10_000, DRAWS, seed).expect("zipf");
        let fit = fit_zipf_mle(&samples, Some(10_000)).expect("fit");
        let ok = !fit.degenerate && (fit.rho - 1.5).abs() <= 0.05;
        pass &= ok;
        detail.push_str(&format!("rho(seed {seed}) = {:.4}, ", fit.rho));
    }

    criterion(
        9,
        pass,
        &format!(
            "on 10^5 pinned-PRNG draws, {}all within +/- 0.05 of the true \
             alpha = 2.5 / rho = 1.5: {pass}",
            detail
        ),
    );
}

#[test]
fn c10_engine_equivalence() {
    let mut compared = 0u32;
    let mut divergences = 0u32;
    for rule in [RoundingRule::Ceiling, RoundingRule::Floor] {
        for max_ticks in 2..=500u64 {
            let mut config = SimConfig::with_max_ticks(max_ticks);
            config.rounding_rule = rule;
            let sweep = run_sweep(&config).expect("sweep");
            let event = run_event_driven(&config).expect("event");
            let same = sweep.events == event.events
                && sweep.nodes == event.nodes
                && sweep.births_per_tick == event.births_per_tick
                && sweep.final_tick == event.final_tick;
            compared += 1;
            if !same {
                divergences += 1;
            }
        }
    }
    criterion(
        10,
        divergences == 0,
        &format!(
            "sweep and event-driven engines agree on {compared} configs \
             (max_ticks 2..=500, both rounding rules); {divergences} divergences"
        ),
    );
}

#[test]
fn c11_serialization_round_trip() {
    let result = run(&SimConfig::with_max_nodes(5000)).expect("run");
    let base = tempfile::tempdir().expect("tempdir");
    let dir_a = base.path().join("a");
    let dir_b = base.path().join("b");

    write_run(&result, &dir_a).expect("write a");
    write_run(&result, &dir_b).expect("write b");

    let round_trip = read_run(&dir_a).expect("read") == result;

    let mut byte_identical = true;
    for entry in fs::read_dir(&dir_a).expect("list") {
        let name = entry.expect("entry").file_name();
        let a = fs::read(dir_a.join(&name)).expect("read a");
        let b = fs::read(dir_b.join(&name)).expect("read b");
        byte_identical &= a == b;
    }

    let events_path = dir_a.join(EVENTS_FILE);
    let mut bytes = fs::read(&events_path).expect("events");
    let mid = bytes.len() / 2;
    bytes[mid] = if bytes[mid] == b'1' { b'2' } else { b'1' };
    fs::write(&events_path, &bytes).expect("tamper");
    let tamper_detected = matches!(read_run(&dir_a), Err(ExportError::DigestMismatch { .. }));

    criterion(
        11,
        round_trip && byte_identical && tamper_detected,
        &format!(
            "write-read round trip equal: {round_trip}; double-write byte identity \
             across all artifacts: {byte_identical}; single-byte tamper detected \
             by digest: {tamper_detected}"
        ),
    );
}
