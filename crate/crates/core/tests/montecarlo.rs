use proptest::prelude::*;
use swipt_core::analytic::{capacity_noncooperative, outage_noncooperative};
use swipt_core::montecarlo::{
    estimate_capacity, estimate_many, estimate_outage, sample_realization, trial_stream, McConfig,
    Metric,
};
use swipt_core::{Scheme, SystemParams};

fn reference(db: f64) -> SystemParams {
    SystemParams::reference(1.0).with_snr_db(db)
}

#[test]
fn unit_rate_gains_have_unit_mean() {
    let p = SystemParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
    let mut rng = trial_stream(7, 0);
    let n = 1_000_000;
    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let g = sample_realization(&p, &mut rng).gains;
        sx += g.x;
        sy += g.y;
        sz += g.z;
    }
    for (name, s) in [("x", sx), ("y", sy), ("z", sz)] {
        let mean = s / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{name}: {mean}");
    }
}

#[test]
fn relay_gain_passes_kolmogorov_smirnov() {
    let p = reference(10.0);
    let mut rng = trial_stream(11, 0);
    let n = 100_000;
    let mut y: Vec<f64> = (0..n)
        .map(|_| sample_realization(&p, &mut rng).gains.y)
        .collect();
    y.sort_by(f64::total_cmp);
    let d = y
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let cdf = -(-p.lambda1 * v).exp_m1();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max);
    let critical = 1.628 / (n as f64).sqrt();
    assert!(d < critical, "D = {d}, 1% critical value {critical}");
}

#[test]
fn binomial_error_matches_batch_spread() {
    // At 5 dB the proposed outage is around 0.1, well inside the normal regime.
    let p = reference(5.0);
    let batches = 1000;
    let trials = 10_000;
    let mut means = Vec::with_capacity(batches);
    let mut reported = 0.0;
    for b in 0..batches {
        let cfg = McConfig::new(trials, 1000 + b as u64, 1).unwrap();
        let e = estimate_outage(Scheme::ProposedDpss, &p, &cfg).unwrap();
        means.push(e.mean);
        reported += e.std_err / batches as f64;
    }
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
    let observed = var.sqrt();
    assert!(
        (observed / reported - 1.0).abs() < 0.05,
        "batch spread {observed:.4e}, reported {reported:.4e}"
    );
}

#[test]
fn direct_link_outage_matches_closed_form() {
    let cfg = McConfig::new(1_000_000, 3, 2).unwrap();
    for db in [0.0, 10.0, 20.0] {
        let p = reference(db);
        let mc = estimate_outage(Scheme::NonCooperative, &p, &cfg).unwrap();
        let exact = outage_noncooperative(&p);
        assert!(mc.z_score(exact).abs() < 4.0, "{db} dB: {mc:?} vs {exact}");
    }
}

#[test]
fn direct_link_capacity_matches_closed_form() {
    let cfg = McConfig::new(1_000_000, 5, 2).unwrap();
    for db in [0.0, 20.0] {
        let p = reference(db);
        let mc = estimate_capacity(Scheme::NonCooperative, &p, &cfg).unwrap();
        let exact = capacity_noncooperative(&p).unwrap();
        assert!(mc.z_score(exact).abs() < 4.0, "{db} dB: {mc:?} vs {exact}");
    }
}

#[test]
fn proposed_capacity_is_highest() {
    let cfg = McConfig::new(200_000, 9, 2).unwrap();
    let schemes = Scheme::comparison_set();
    for db in [10.0, 20.0, 30.0] {
        let est = estimate_many(&schemes, Metric::Capacity, &reference(db), &cfg).unwrap();
        for (s, b) in schemes.iter().zip(&est).skip(1) {
            let se = est[0].std_err.hypot(b.std_err);
            assert!(est[0].mean - b.mean > 2.0 * se, "{db} dB vs {s}");
        }
    }
}

#[test]
fn invalid_configs_rejected() {
    assert!(McConfig::new(0, 1, 1).is_err());
    assert!(McConfig::new(10, 1, 0).is_err());
    let cfg = McConfig {
        trials: 0,
        seed: 1,
        workers: 1,
    };
    assert!(estimate_outage(Scheme::ProposedDpss, &reference(10.0), &cfg).is_err());
    let ok = McConfig::new(10, 1, 1).unwrap();
    let bad = [Scheme::FixedPs(1.5)];
    assert!(estimate_many(&bad, Metric::Outage, &reference(10.0), &ok).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn estimates_do_not_depend_on_workers(
        seed in any::<u64>(),
        trials in 1u64..200_000,
        workers in 2usize..6,
        db in 0.0f64..30.0,
    ) {
        let p = reference(db);
        let schemes = Scheme::comparison_set();
        for metric in [Metric::Outage, Metric::Capacity] {
            let one = estimate_many(&schemes, metric, &p, &McConfig::new(trials, seed, 1).unwrap()).unwrap();
            let many = estimate_many(&schemes, metric, &p, &McConfig::new(trials, seed, workers).unwrap()).unwrap();
            prop_assert_eq!(one, many);
        }
    }
}
