use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use relchange::bootstrap::{bootstrap_max, bootstrap_statistic, prepare_component, MultiplierDraw};
use relchange::cusum::{integral_squared, tau};
use relchange::variance::{bartlett_lrv, combine_and_clamp};
use relchange::{
    asymptotic_test, bootstrap_test, component_statistic, cusum_path, estimate_changepoint,
    gen_innovations, inject_shifts, relevant_set, scaling_sequences, BootstrapConfig, ComponentSeries,
    EstimationConfig, InnovationModel, PanelSeries, SHatForm, ThresholdVec, VarianceCombine,
};

fn series(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3f64..1e3, len)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #[test]
    fn cusum_shift_invariant(z in series(4..200), c in -1e4f64..1e4) {
        let base = cusum_path(&ComponentSeries::new(&z).unwrap());
        let shifted: Vec<f64> = z.iter().map(|v| v + c).collect();
        let moved = cusum_path(&ComponentSeries::new(&shifted).unwrap());
        let scale = max_abs(&z) + c.abs();
        for (a, b) in base.values().iter().zip(moved.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn cusum_scale_equivariant(z in series(4..200), c in prop::sample::select(vec![-3.5, -1.0, 0.001, 2.0, 17.25, 1e6])) {
        let base = cusum_path(&ComponentSeries::new(&z).unwrap());
        let scaled: Vec<f64> = z.iter().map(|v| v * c).collect();
        let moved = cusum_path(&ComponentSeries::new(&scaled).unwrap());
        let bound = 1e-12 * c.abs() * max_abs(&z).max(f64::MIN_POSITIVE);
        for (a, b) in base.values().iter().zip(moved.values()) {
            prop_assert!((c * a - b).abs() <= bound.max(1e-12 * b.abs()));
        }
    }

    #[test]
    fn integral_squared_nonnegative_and_zero_only_for_zero_path(z in series(4..100)) {
        let p = cusum_path(&ComponentSeries::new(&z).unwrap());
        let i = integral_squared(&p);
        prop_assert!(i >= 0.0);
        prop_assert_eq!(i == 0.0, p.values().iter().all(|u| *u == 0.0));
    }

    #[test]
    fn tau_symmetric(t in 0.001f64..0.999) {
        let a = tau(t).unwrap();
        let b = tau(1.0 - t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    // integer data and integer maps keep every partial sum exact, so ties
    // are genuine ties before and after the map
    #[test]
    fn argmax_survives_affine_maps(
        z in prop::collection::vec(-50i32..50, 20..120),
        c in prop::sample::select(vec![-7, -2, -1, 1, 3, 11]),
        b in -1000i32..1000,
    ) {
        let x: Vec<f64> = z.iter().map(|v| *v as f64).collect();
        let y: Vec<f64> = z.iter().map(|v| (c * v + b) as f64).collect();
        let a = estimate_changepoint(&ComponentSeries::new(&x).unwrap(), 0.05).unwrap();
        let m = estimate_changepoint(&ComponentSeries::new(&y).unwrap(), 0.05).unwrap();
        prop_assert_eq!(a.k_hat, m.k_hat);
    }

    #[test]
    fn noiseless_step_located_exactly(n in 20usize..300, frac in 0.1f64..0.9, jump in prop::sample::select(vec![-4.0, 0.5, 1.0, 9.0])) {
        let k = ((n as f64 * frac) as usize).clamp(n / 20 + 1, n - n / 20 - 1);
        let z: Vec<f64> = (0..n).map(|j| if j < k { 0.0 } else { jump }).collect();
        let est = estimate_changepoint(&ComponentSeries::new(&z).unwrap(), 0.05).unwrap();
        prop_assert_eq!(est.k_hat, k);
    }

    #[test]
    fn t_stat_strictly_decreasing_in_threshold(seed in 0u64..1000, d1 in 0.05f64..3.0, bump in 0.01f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z: Vec<f64> = (0..200).map(|j| rng.sample::<f64, _>(StandardNormal) + if j >= 100 { 1.0 } else { 0.0 }).collect();
        let zs = ComponentSeries::new(&z).unwrap();
        for bias in [false, true] {
            let cfg = EstimationConfig { bias_correction: bias, ..EstimationConfig::default() };
            let lo = component_statistic(&zs, d1, &cfg).unwrap();
            let hi = component_statistic(&zs, d1 + bump, &cfg).unwrap();
            prop_assert!(hi.t_stat < lo.t_stat);
        }
    }

    #[test]
    fn bartlett_shift_and_scale(x in series(10..150), c in -50f64..50.0, s in 0.1f64..10.0, bw in 0usize..5) {
        let base = bartlett_lrv(&x, bw);
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        let tol = 1e-9 * x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64 + 1e-12;
        prop_assert!((bartlett_lrv(&shifted, bw) - base).abs() <= tol);
        prop_assert!((bartlett_lrv(&scaled, bw) - s * s * base).abs() <= tol * s * s);
    }

    #[test]
    fn clamp_bounds_and_monotonicity(v1 in 0.0f64..20.0, v2 in 0.0f64..20.0, lo in 0.01f64..2.0, width in 0.0f64..10.0) {
        let hi = lo + width;
        for comb in [VarianceCombine::Average, VarianceCombine::Max] {
            let e = combine_and_clamp(v1, v2, comb, lo, hi);
            let s2 = e.sigma_hat * e.sigma_hat;
            prop_assert!(s2 >= lo * (1.0 - 1e-12) && s2 <= hi * (1.0 + 1e-12));
            let wider = combine_and_clamp(v1, v2, comb, lo * 0.5, hi);
            prop_assert!(wider.sigma_hat <= e.sigma_hat);
            let taller = combine_and_clamp(v1, v2, comb, lo, hi * 2.0);
            prop_assert!(taller.sigma_hat >= e.sigma_hat);
        }
    }

    // B is linear in the multipliers through the path and even through ŝ,
    // so flipping every sign flips B: the conditional mean is zero
    #[test]
    fn bootstrap_statistic_odd_in_multipliers(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z: Vec<f64> = (0..100).map(|j| rng.sample::<f64, _>(StandardNormal) + if j >= 50 { 1.5 } else { 0.0 }).collect();
        let zs = ComponentSeries::new(&z).unwrap();
        let k = estimate_changepoint(&zs, 0.05).unwrap().k_hat;
        let comp = prepare_component(&zs, k, 1.0, 1.0, 5).unwrap();
        prop_assume!(comp.is_active());
        let xi: Vec<f64> = (0..20).map(|_| rng.sample(StandardNormal)).collect();
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        let b = bootstrap_statistic(&comp, &MultiplierDraw::from_values(xi), 2.0, SHatForm::Squared, false).unwrap();
        let nb = bootstrap_statistic(&comp, &MultiplierDraw::from_values(neg), 2.0, SHatForm::Squared, false).unwrap();
        prop_assert!((b + nb).abs() <= 1e-10 * b.abs().max(1.0));
    }
}

#[test]
fn decision_monotone_in_thresholds() {
    let mut panel = gen_innovations(InnovationModel::I, 200, 20, 5).unwrap();
    panel = inject_shifts(panel, 1.0, &[0.5; 20]).unwrap();
    let cfg = EstimationConfig::default();
    let mut prev_stat = f64::INFINITY;
    let mut was_rejected = true;
    for i in 1..40 {
        let delta = 0.1 * i as f64;
        let r = asymptotic_test(&panel, &ThresholdVec::broadcast(delta, 20).unwrap(), 0.05, &cfg).unwrap();
        assert!(r.statistic < prev_stat);
        assert!(was_rejected || !r.reject, "rejection reappeared at Δ = {delta}");
        prev_stat = r.statistic;
        was_rejected = r.reject;
    }
}

#[test]
fn conditional_mean_of_bootstrap_statistic_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let z: Vec<f64> = (0..200).map(|j| rng.sample::<f64, _>(StandardNormal) + if j >= 80 { 1.0 } else { 0.0 }).collect();
    let zs = ComponentSeries::new(&z).unwrap();
    let k = estimate_changepoint(&zs, 0.05).unwrap().k_hat;
    let comp = prepare_component(&zs, k, 1.1, 1.0, 4).unwrap();
    assert!(comp.is_active());
    let draws: Vec<f64> = (0..10_000)
        .map(|r| bootstrap_statistic(&comp, &MultiplierDraw::draw(3, r, 50), 2.3, SHatForm::Squared, false).unwrap())
        .collect();
    let m = draws.iter().sum::<f64>() / draws.len() as f64;
    let sd = (draws.iter().map(|b| (b - m).powi(2)).sum::<f64>() / (draws.len() - 1) as f64).sqrt();
    assert!(m.abs() < 3.0 * sd / 100.0, "mean {m}, sd {sd}");
}

#[test]
fn bootstrap_max_is_zero_when_no_indicator_fires() {
    // jumps far below n^{-1/4}
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cols: Vec<Vec<f64>> = (0..6).map(|_| (0..100).map(|_| 0.01 * rng.sample::<f64, _>(StandardNormal)).collect()).collect();
    let (a_d, b_d) = scaling_sequences(6).unwrap();
    let comps: Vec<_> = cols
        .iter()
        .map(|c| {
            let zs = ComponentSeries::new(c).unwrap();
            let k = estimate_changepoint(&zs, 0.05).unwrap().k_hat;
            prepare_component(&zs, k, 0.01, 1.0, 1).unwrap()
        })
        .collect();
    assert!(comps.iter().all(|c| !c.is_active()));
    for r in 0..20 {
        let xi = MultiplierDraw::draw(8, r, 100);
        assert_eq!(bootstrap_max(&comps, &xi, a_d, b_d, SHatForm::Squared, true).unwrap(), 0.0);
    }
    let panel = PanelSeries::from_columns(cols).unwrap();
    let rep = bootstrap_test(&panel, &ThresholdVec::broadcast(1.0, 6).unwrap(), 0.05, &EstimationConfig::default(), &BootstrapConfig::new(1, 100, 1)).unwrap();
    assert!(rep.replicate_stats.iter().all(|b| *b == 0.0));
    assert_eq!(rep.g_star, 0.0);
}

#[test]
fn max_statistic_bounds_every_component_and_relevant_set_recomputes() {
    let panel = inject_shifts(gen_innovations(InnovationModel::II, 300, 30, 2).unwrap(), 1.2, &[0.4; 30]).unwrap();
    let r = asymptotic_test(&panel, &ThresholdVec::broadcast(1.0, 30).unwrap(), 0.05, &EstimationConfig::default()).unwrap();
    for s in &r.per_component {
        assert!(r.statistic >= r.a_d * (s.t_stat - r.b_d));
        assert!((s.recompute(300) - s.t_stat).abs() <= 1e-12 * s.t_stat.abs().max(1.0));
    }
    assert_eq!(relevant_set(&r.per_component, r.critical_value, r.a_d, r.b_d), r.relevant_set);
    assert_eq!(r.reject, r.statistic > r.critical_value);
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let panel = inject_shifts(gen_innovations(InnovationModel::III, 100, 40, 17).unwrap(), 1.0, &[0.5; 40]).unwrap();
    let deltas = ThresholdVec::broadcast(1.0, 40).unwrap();
    let est = EstimationConfig::default();
    let boot = BootstrapConfig::new(10, 200, 5);
    let one = in_pool(1, || {
        (
            asymptotic_test(&panel, &deltas, 0.05, &est).unwrap(),
            bootstrap_test(&panel, &deltas, 0.05, &est, &boot).unwrap(),
            gen_innovations(InnovationModel::IV, 50, 12, 3).unwrap(),
        )
    });
    let eight = in_pool(8, || {
        (
            asymptotic_test(&panel, &deltas, 0.05, &est).unwrap(),
            bootstrap_test(&panel, &deltas, 0.05, &est, &boot).unwrap(),
            gen_innovations(InnovationModel::IV, 50, 12, 3).unwrap(),
        )
    });
    assert_eq!(one.0, eight.0);
    assert_eq!(one.1.g_star.to_bits(), eight.1.g_star.to_bits());
    assert_eq!(one.1, eight.1);
    assert_eq!(one.2.as_column_major(), eight.2.as_column_major());
}
