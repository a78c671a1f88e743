//! Monte Carlo checks of the overlap tests against their error exponents,
//! and of the coverage and stage bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shotgun_core::diagnostics::coverage_from_starts;
use shotgun_core::overlap::{map_overlap_score, map_overlap_test, Hypothesis, MapScorerConfig};
use shotgun_core::theory::{greedy_stage_expectation, istar_general, ncov_estimate, JointModel, TiltFamily};
use shotgun_core::{DmcChannel, Distribution};

fn uniform() -> Distribution {
    Distribution::uniform(4)
}

fn random_codes(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..4u8)).collect()
}

fn corrupt(rng: &mut ChaCha8Rng, x: &[u8], eps: f64) -> Vec<u8> {
    x.iter()
        .map(|&a| if rng.random::<f64>() < eps { (a + rng.random_range(1..4u8)) % 4 } else { a })
        .collect()
}

#[test]
fn istar_is_locally_optimal() {
    for eps in [0.01, 0.05, 0.1] {
        let ch = DmcChannel::symmetric(eps).unwrap();
        let best = istar_general(&uniform(), &ch).unwrap();
        let fam = TiltFamily::new(&JointModel::new(&uniform(), &ch).unwrap()).unwrap();
        let obj = |theta: f64| {
            let (miss, fa) = fam.exponents(fam.solve_mu(theta).unwrap()).unwrap();
            (2.0 * miss).min(fa)
        };
        let theta = best.theta.unwrap();
        assert!((obj(theta) - best.bits).abs() < 1e-9);
        assert!(obj(theta + 1e-3) <= best.bits + 1e-9 && obj(theta - 1e-3) <= best.bits + 1e-9);
    }
}

#[test]
fn false_alarms_respect_the_exponent() {
    let ch = DmcChannel::symmetric(0.1).unwrap();
    let cfg = MapScorerConfig::new(&uniform(), &ch, None).unwrap();
    let fam = TiltFamily::new(&JointModel::new(&uniform(), &ch).unwrap()).unwrap();
    let (_, fa) = fam.exponents(fam.solve_mu(cfg.theta()).unwrap()).unwrap();
    let ell = 20;
    let bound = (-(ell as f64) * fa).exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 100_000;
    let hits = (0..trials)
        .filter(|_| {
            let (x, y) = (random_codes(&mut rng, ell), random_codes(&mut rng, ell));
            map_overlap_test(&x, &y, &cfg).unwrap() == Hypothesis::Overlap
        })
        .count();
    let rate = hits as f64 / trials as f64;
    assert!(rate <= bound + 3.0 * (bound / trials as f64).sqrt(), "{rate} vs {bound}");
}

#[test]
#[ignore = "unattainable at the I*-optimal threshold: about 5% of unrelated pairs pass at some length >= 10"]
fn unrelated_noisy_reads_score_low() {
    let cfg = MapScorerConfig::new(&uniform(), &DmcChannel::symmetric(0.1).unwrap(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let low = (0..10_000)
        .filter(|_| {
            let (x, y) = (random_codes(&mut rng, 40), random_codes(&mut rng, 40));
            map_overlap_score(&x, &y, &cfg).unwrap() < 10
        })
        .count();
    assert!(low >= 9900, "{low}");
}

#[test]
fn unrelated_noisy_scores_respect_union_bound() {
    let ch = DmcChannel::symmetric(0.1).unwrap();
    let cfg = MapScorerConfig::new(&uniform(), &ch, None).unwrap();
    let fam = TiltFamily::new(&JointModel::new(&uniform(), &ch).unwrap()).unwrap();
    let (_, fa) = fam.exponents(fam.solve_mu(cfg.theta()).unwrap()).unwrap();
    let bound: f64 = (10..=40).map(|ell| (-(ell as f64) * fa).exp2()).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 10_000;
    let high = (0..trials)
        .filter(|_| {
            let (x, y) = (random_codes(&mut rng, 40), random_codes(&mut rng, 40));
            map_overlap_score(&x, &y, &cfg).unwrap() >= 10
        })
        .count();
    let rate = high as f64 / trials as f64;
    assert!(rate <= bound, "{rate} vs {bound}");
}

#[test]
fn true_noisy_overlaps_are_found() {
    let eps = 0.01;
    let cfg = MapScorerConfig::new(&uniform(), &DmcChannel::symmetric(eps).unwrap(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 2000;
    let found = (0..trials)
        .filter(|_| {
            // Two reads of length 40 whose windows overlap by 30.
            let w = random_codes(&mut rng, 50);
            let a = corrupt(&mut rng, &w[..40], eps);
            let b = corrupt(&mut rng, &w[10..], eps);
            map_overlap_score(&a, &b, &cfg).unwrap() >= 30
        })
        .count();
    assert!(found as f64 >= 0.99 * trials as f64, "{found}");
}

fn coverage_failures(eps: f64, g: usize, l: usize, rng: &mut ChaCha8Rng) -> f64 {
    let n = ncov_estimate(eps, g, l).unwrap();
    let failures = (0..500)
        .filter(|_| {
            let starts: Vec<usize> = (0..n).map(|_| rng.random_range(0..g)).collect();
            !coverage_from_starts(g, l, &starts).covered
        })
        .count();
    failures as f64 / 500.0
}

#[test]
#[ignore = "unattainable: the formula leaves about eps * ln(G / (L eps)) expected gaps"]
fn coverage_failure_at_ncov_is_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for eps in [0.05, 0.1, 0.3] {
        let rate = coverage_failures(eps, 10_000, 27, &mut rng);
        assert!(rate <= 2.0 * eps, "eps {eps}: {rate}");
    }
}

#[test]
fn coverage_failure_at_ncov_matches_poisson() {
    let (g, l) = (10_000, 27);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for eps in [0.01, 0.05, 0.1] {
        let n = ncov_estimate(eps, g, l).unwrap() as f64;
        let gaps = n * (-n * l as f64 / g as f64).exp();
        let predicted = 1.0 - (-gaps).exp();
        let rate = coverage_failures(eps, g, l, &mut rng);
        let sigma = (predicted * (1.0 - predicted) / 500.0).sqrt();
        assert!((rate - predicted).abs() <= 3.0 * sigma + 0.01, "eps {eps}: {rate} vs {predicted}");
    }
}

#[test]
fn ncov_decreases_in_eps() {
    let vals: Vec<usize> = [0.01, 0.05, 0.1, 0.3, 0.6, 0.9].iter().map(|&e| ncov_estimate(e, 10_000, 27).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] >= w[1]), "{vals:?}");
    let direct = ((10_000f64 / 27.0) * (10_000f64 / 2.7).ln()).ceil() as usize;
    assert_eq!(ncov_estimate(0.1, 10_000, 27).unwrap(), direct);
}

#[test]
fn stage_expectation_peaks_at_an_end() {
    let p = uniform();
    for (n, g, l) in [(5000, 10_000, 27), (2000, 10_000, 40), (800, 2000, 22), (20_000, 100_000, 35)] {
        let vals: Vec<f64> = (0..=l).map(|ell| greedy_stage_expectation(n, g, l, ell, &p)).collect();
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        assert!(max == vals[0] || max == vals[l], "({n}, {g}, {l})");
        // The empty-overlap term is below one once N exceeds G ln N / L.
        let below = vals[0] < 1.0;
        let ln_bound = g as f64 * (n as f64).ln() / l as f64;
        assert_eq!(below, n as f64 > ln_bound, "({n}, {g}, {l})");
    }
}
