use alloc::vec::Vec;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::copulas::LevyCopula;
use crate::decompose::JumpDecomposition;
use crate::margins::MarginalTail;

fn expo(l: f64, a: f64) -> MarginalTail {
    MarginalTail::expo(l, a).unwrap()
}

fn dec(c: LevyCopula, m1: MarginalTail, m2: MarginalTail) -> JumpDecomposition {
    JumpDecomposition::new(c, m1, m2).unwrap()
}

fn model(c: LevyCopula, drift: f64) -> RiskModel {
    RiskModel::new(drift, dec(c, expo(1.0, 1.0), expo(1.0, 1.0))).unwrap()
}

#[test]
fn path_streams_are_reproducible_and_distinct() {
    let a: Vec<u64> = (0..4).map(|_| path_rng(9, 3).random::<u64>()).collect();
    assert!(a.windows(2).all(|w| w[0] == w[1]));
    let mut r0 = path_rng(9, 0);
    let mut r1 = path_rng(9, 1);
    assert_ne!(r0.random::<u64>(), r1.random::<u64>());
}

#[test]
fn complete_dependence_equal_margins_jump_together() {
    let d = dec(LevyCopula::CompleteDependence, expo(1.0, 1.0), expo(1.0, 1.0));
    let mut rng = path_rng(1, 0);
    for _ in 0..1000 {
        let (a, b) = sample_common_jump(&d, &mut rng).unwrap();
        assert!(a > 0.0);
        assert_eq!(a, b);
    }
}

#[test]
fn strong_clayton_dependence_correlates_jump_sizes() {
    let d = dec(LevyCopula::clayton(1.0, 10.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    let s = JumpSampler::new(&d).unwrap();
    let mut rng = path_rng(2, 0);
    let n = 100_000;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let (a, b) = s.sample(JumpClass::Common, &mut rng).unwrap();
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    let n = n as f64;
    let cov = sab / n - sa / n * sb / n;
    let corr = cov / ((saa / n - (sa / n).powi(2)) * (sbb / n - (sb / n).powi(2))).sqrt();
    assert!(corr > 0.9, "corr = {corr}");
}

fn check_tail(d: &JumpDecomposition, k: JumpClass, zs: &[f64], n: usize, seed: u64) {
    let s = JumpSampler::new(d).unwrap();
    let mut rng = path_rng(seed, 0);
    let sums: Vec<f64> = (0..n)
        .map(|_| {
            let (a, b) = s.sample(k, &mut rng).unwrap();
            a + b
        })
        .collect();
    let lambda = d.intensity(k);
    for &z in zs {
        let p = d.tail_pk_at(k, z).unwrap().value / lambda;
        let hits = sums.iter().filter(|&&w| w > z).count() as u64;
        let est = Proportion::from_counts(hits, n as u64);
        assert!(est.z_score(p) < 3.0, "{k:?} z={z}: {est:?} vs {p}");
    }
}

#[test]
fn common_jump_sum_matches_decomposed_tail() {
    let d = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    check_tail(&d, JumpClass::Common, &[1.0, 2.0, 4.0], 1_000_000, 3);
}

#[test]
fn single_jumps_match_decomposed_tails() {
    let pareto = MarginalTail::pareto(1.0, 2.0, 1.0).unwrap();
    let cases = [
        dec(LevyCopula::clayton(1.0, 2.0).unwrap(), expo(1.0, 1.0), expo(2.0, 0.5)),
        dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0)),
        dec(LevyCopula::clayton(1.0, 2.0).unwrap(), pareto, pareto),
        dec(LevyCopula::CompleteDependence, expo(2.0, 1.0), expo(1.0, 1.0)),
    ];
    for (i, d) in cases.iter().enumerate() {
        for k in JumpClass::ALL {
            if d.intensity(k) > 0.0 {
                check_tail(d, k, &[0.5, 1.5, 3.0], 200_000, 10 + i as u64);
            }
        }
    }
}

#[test]
fn compound_poisson_paths_all_pass_with_clock_shares() {
    let m = model(LevyCopula::clayton(1.0, 1.0).unwrap(), 0.0);
    let out = simulate_first_passage(&m, &SimConfig::new(4, 20_000, 3.0)).unwrap();
    assert!(out.records.iter().all(|r| r.ruined()));
    assert!(out.warnings.is_empty());
    let d = m.decomposition();
    let lambda = d.lambda_sum().unwrap();
    let x0 = simulate_first_passage(&m, &SimConfig::new(5, 20_000, 0.0)).unwrap();
    for (k, p) in JumpClass::ALL.iter().zip(cause_fractions(&x0.records)) {
        assert!(p.z_score(d.intensity(*k) / lambda) < 3.0, "{k:?}: {p:?}");
    }
    for r in &out.records {
        assert_eq!(r.v, r.y);
        assert_eq!(r.g_prev, r.tau);
    }
}

#[test]
fn zero_barrier_ruin_with_drift() {
    let m = model(LevyCopula::nonhom(1.0, 1.0).unwrap(), 4.0);
    let out = simulate_first_passage(&m, &SimConfig::new(6, 20_000, 0.0).with_horizon(200.0)).unwrap();
    let p = ruin_fraction(&out.records);
    assert!(p.z_score(0.5) < 3.0, "{p:?}");
    let bias = censoring_bias(&m, &out.records).unwrap();
    assert!(bias.value < 1e-6, "{bias:?}");
}

#[test]
fn ruin_at_positive_barrier_matches_pollaczek_khintchine() {
    let m = model(LevyCopula::Independence, 4.0);
    let out = simulate_first_passage(&m, &SimConfig::new(7, 20_000, 2.0)).unwrap();
    let p = ruin_fraction(&out.records);
    assert!(p.z_score(0.5 * (-1.0f64).exp()) < 3.0, "{p:?}");
}

#[test]
fn chunked_runs_reproduce_the_full_run() {
    let m = model(LevyCopula::clayton(1.0, 2.0).unwrap(), 3.0);
    let cfg = SimConfig::new(11, 300, 1.5);
    let full = simulate_range(&m, &cfg, 0..300).unwrap();
    let mut parts = simulate_range(&m, &cfg, 0..97).unwrap();
    parts.extend(simulate_range(&m, &cfg, 97..250).unwrap());
    parts.extend(simulate_range(&m, &cfg, 250..300).unwrap());
    assert_eq!(full, parts);
}

#[test]
fn multi_barrier_records_match_single_barrier_runs() {
    let m = model(LevyCopula::clayton(1.0, 2.0).unwrap(), 3.0);
    let cfg = SimConfig::new(12, 200, 0.0).with_horizon(150.0);
    let barriers = [0.5, 1.0, 3.0];
    let multi = simulate_range_multi(&m, &cfg, &barriers, 0..200).unwrap();
    for (x, recs) in barriers.iter().zip(&multi) {
        let single = simulate_range(&m, &SimConfig { barrier: *x, ..cfg }, 0..200).unwrap();
        assert_eq!(&single, recs);
    }
}

#[test]
fn clock_gaps_are_exponential() {
    let m = model(LevyCopula::clayton(1.0, 1.0).unwrap(), 0.0);
    let gaps = clock_gaps(&m, 13, 300_000).unwrap();
    for (k, g) in JumpClass::ALL.iter().zip(&gaps) {
        let rate = m.decomposition().intensity(*k);
        assert!(g.len() > 50_000);
        let d = ks_statistic(g, |t| 1.0 - (-rate * t).exp());
        assert!(ks_p_value(d, g.len()) > 0.01, "{k:?}: d = {d}");
    }
}

#[test]
fn kolmogorov_tail_reference_values() {
    // Q(1.3581) ≈ 0.05 and Q(1.6276) ≈ 0.01 in the large-sample limit.
    assert!((ks_p_value(1.3581 / 1e4, 100_000_000) - 0.05).abs() < 1e-3);
    assert!((ks_p_value(1.6276 / 1e4, 100_000_000) - 0.01).abs() < 1e-3);
    assert_eq!(ks_p_value(0.0, 100), 1.0);
}

#[test]
fn pareto_scale_function_is_linear() {
    let p = MarginalTail::pareto(1.0, 2.0, 1.0).unwrap();
    let d = dec(LevyCopula::Independence, p, p);
    for x in [2.0, 5.0, 20.0] {
        assert_relative_eq!(scale_function(&d, x).unwrap().value, x, max_relative = 1e-7);
    }
    assert_eq!(tail_index(&d).unwrap(), 2.0);
    assert!(tail_index(&dec(LevyCopula::Independence, expo(1.0, 1.0), p)).is_err());
    assert_eq!(gpd_tail(0.0, 2.0), 1.0);
    assert_relative_eq!(gpd_tail(2.0, 2.0), 0.25, max_relative = 1e-15);
}

#[test]
fn asymptotic_rows_report_every_barrier() {
    let p = MarginalTail::pareto(1.0, 2.0, 1.0).unwrap();
    let d = dec(LevyCopula::clayton(1.0, 2.0).unwrap(), p, p);
    let c = 1.25 * d.mean_sum();
    let m = RiskModel::new(c, d).unwrap();
    let rows = estimate_asymptotics(&m, &SimConfig::new(14, 400, 0.0), &[1.0, 2.0]).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.paths, 400);
        assert_eq!(r.ruined + r.censored, 400);
        assert!(r.scaled_overshoot.windows(2).all(|w| w[0] <= w[1]));
        let s: f64 = r.cause.iter().map(|c| c.estimate).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
    assert!(rows[0].ruined >= rows[1].ruined);
    assert!(estimate_asymptotics(&m, &SimConfig::new(14, 10, 0.0), &[2.0, 1.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn records_are_consistent(seed in 0u64..1000, x in 0.0f64..4.0, theta in 0.2f64..6.0, drift in 2.5f64..6.0) {
        let m = model(LevyCopula::clayton(1.0, theta).unwrap(), drift);
        let recs = simulate_range(&m, &SimConfig::new(seed, 50, x), 0..50).unwrap();
        for r in recs {
            prop_assert!(r.v >= r.y && r.y >= 0.0);
            prop_assert!(r.g_prev <= r.tau);
            prop_assert!(!r.crept);
            if r.ruined() {
                prop_assert!(r.u > 0.0);
                prop_assert!((1..=3).contains(&r.k));
            } else {
                prop_assert_eq!(r.k, 0);
            }
        }
    }
}
