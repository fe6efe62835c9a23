//! Monte Carlo behaviour at desk scale.

use bsppcc::mc::{critical_values, simulate_null_r};
use bsppcc::{
    accuracy_bound, alpha_sensitivity, bs_sample, build_table, empirical_quantile, paper_table,
    run_test, BsParams, SimConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(n: usize, iterations: u64, seed: u64) -> SimConfig {
    SimConfig {
        n,
        iterations,
        seed,
        ..SimConfig::default()
    }
}

#[test]
fn null_distribution_n46_matches_reference_quantiles() {
    let mut cfg = config(46, 1_000_000, 99);
    cfg.workers = 1;
    let single = simulate_null_r(&cfg).unwrap().into_sorted();
    cfg.workers = 8;
    let many = simulate_null_r(&cfg).unwrap().into_sorted();
    assert_eq!(single, many);

    assert!((empirical_quantile(&single, 0.5).unwrap() - 0.9920).abs() <= 0.003);
    assert!((empirical_quantile(&single, 0.25).unwrap() - 0.9880).abs() <= 0.002);
}

#[test]
fn build_table_reference_rows() {
    let mut tmpl = config(3, 1_000_000, 5);
    tmpl.levels = vec![0.5];
    let t3 = build_table(&[3], &tmpl).unwrap();
    assert!((t3.get(3, 0.5).unwrap() - 0.9787).abs() <= 0.003);

    let mut tmpl = config(1000, 100_000, 5);
    tmpl.levels = vec![0.01];
    let t1000 = build_table(&[1000], &tmpl).unwrap();
    assert!((t1000.get(1000, 0.01).unwrap() - 0.9953).abs() <= 0.005);
}

#[test]
fn table_rows_are_monotone_and_converge() {
    let lo = build_table(&[20], &config(20, 100_000, 1)).unwrap();
    let hi = build_table(&[20], &config(20, 1_000_000, 2)).unwrap();
    let tol = 3.0 * (accuracy_bound(100_000).unwrap() + accuracy_bound(1_000_000).unwrap());
    for t in [&lo, &hi] {
        let row = t.row(20).unwrap();
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
    for (a, b) in lo.row(20).unwrap().iter().zip(hi.row(20).unwrap()) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }
    assert_eq!(hi.meta().seed, Some(2));
    assert_eq!(hi.meta().alpha_gen, Some(1.0));
}

#[test]
fn alpha_probe_reports_deviations() {
    let report = alpha_sensitivity(20, 100_000, &[0.5, 1.0, 2.0], &[0.05, 0.5], 4, 0).unwrap();
    assert_eq!(report.critical.len(), 3);
    assert!(report
        .max_deviation
        .iter()
        .all(|d| d.is_finite() && *d >= 0.0));
}

#[test]
fn generation_is_reproducible() {
    let cfg = config(30, 20_000, 123);
    assert_eq!(
        critical_values(&cfg, None).unwrap(),
        critical_values(&cfg, None).unwrap()
    );
    let other = config(30, 20_000, 124);
    assert_ne!(
        simulate_null_r(&cfg).unwrap().values(),
        simulate_null_r(&other).unwrap().values()
    );
}

#[test]
fn size_at_half_percent_is_calibrated() {
    let table = paper_table().unwrap();
    let params = BsParams::new(1.0, 1.0).unwrap();
    let trials = 10_000;
    let rejected = (0..trials)
        .filter(|&seed| {
            let s = bs_sample(46, &params, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            run_test(&s, &[0.005], &table).unwrap().decisions[0].reject
        })
        .count();
    let rate = rejected as f64 / trials as f64;
    assert!((rate - 0.005).abs() <= 0.003, "{rate}");
}
