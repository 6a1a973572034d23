use latkit::analysis::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[test]
fn tail_agrees_with_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, r, s2) in [(8usize, 10.0, 1.0), (16, 12.0, 0.6), (24, 30.0, 1.0)] {
        let trials = 200_000;
        let hits = (0..trials)
            .filter(|_| (0..n).map(|_| s2 * f64::powi(StandardNormal.sample(&mut rng), 2)).sum::<f64>() > r)
            .count();
        let p = chi_square_tail(n, r, s2).unwrap();
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 3.0 * se, "n={n}");
    }
}

#[test]
fn depth_one_matches_explicit_form() {
    for k in [2usize, 3] {
        let (c, d, vol) = (8usize, 2.0, 1.0);
        let spec = PredictorSpec::new(PredictorFamily::Generic, k, 1, BaseCondition::ChiSquare { c, d, vol }).unwrap();
        for i in 0..20 {
            let delta = 0.1 + 0.03 * i as f64;
            let vnr = db_to_linear(-1.0 + 0.4 * i as f64);
            // top lattice: d doubles, vol^{2/n} gains 2^{1/k}
            let s2 = sigma_sq(vol.powf(2.0 / c as f64) * 2f64.powf(1.0 / k as f64), vnr);
            let explicit = depth_one_explicit(c * k, k, delta * 2.0 * d, s2).unwrap();
            let rec = u_recursion(&spec, delta, vnr).unwrap();
            assert!((explicit - rec).abs() < 1e-12, "k={k} i={i}: {explicit} vs {rec}");
        }
    }
}

#[test]
fn nebe_form_reuses_its_base_curve() {
    let c = TabulatedCurve::leech_qmld();
    let s = PredictorSpec::nebe(c.clone());
    for db in [1.0, 2.0, 3.0, 3.3] {
        let p = c.eval_db(db);
        let q = c.eval_db(db + linear_to_db(2.0));
        let u = u_recursion(&s, 0.25, db_to_linear(db)).unwrap();
        let want = (3.0 * p * p + 3.0 * q * (1.0 - p).powi(2)).min(1.0);
        assert!((u - want).abs() < 1e-12 * want.max(1e-300), "{db}: {u} vs {want}");
    }
}

#[test]
fn three_parity_leech_radius() {
    // point-error 72·1e-5 at 2.02 dB, Λ24 children with regular lists
    let s2 = sigma_sq(1.0, db_to_linear(2.02));
    let target = (72e-5f64 / 6.0).sqrt();
    let d = delta_star(&DeltaStarMode::Regular { n: 24, d: 4.0, eta: 1.0 }, s2, 0.0, target).unwrap();
    assert!((d - 25.0 / 64.0).abs() < 0.02, "{d}");
    assert_eq!(johnson_bound(24, d).unwrap(), 4);
}

#[test]
fn split_is_no_better_than_plain() {
    for n in [8usize, 16, 32] {
        let plain = PredictorSpec::barnes_wall(n, false).unwrap();
        let split = PredictorSpec::barnes_wall(n, true).unwrap();
        for i in 0..15 {
            let delta = 0.2 + 0.03 * i as f64;
            for db in [1.0, 3.0, 5.0] {
                let a = u_recursion(&plain, delta, db_to_linear(db)).unwrap();
                let b = u_recursion(&split, delta, db_to_linear(db)).unwrap();
                assert!(b >= a * (1.0 - 1e-12), "n={n} δ={delta} {db} dB");
            }
        }
    }
}

#[test]
fn bw_radius_below_three_eighths() {
    for (n, db) in [(16usize, 4.5), (32, 3.7), (64, 3.1)] {
        let spec = PredictorSpec::barnes_wall(n, true).unwrap().with_bdd_curves(TabulatedCurve::bw_bdd_all());
        let d = delta_star(&DeltaStarMode::Modified(spec), 0.0, db_to_linear(db), 1e-5).unwrap();
        assert!(d < 0.375, "BW{n}: {d}");
    }
}

proptest! {
    #[test]
    fn tail_is_monotone(n in 1usize..40, r in 0.0f64..80.0, dr in 0.01f64..5.0, s in 0.05f64..4.0, ds in 0.01f64..1.0) {
        let n = 2 * n;
        let a = chi_square_tail(n, r, s).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(chi_square_tail(n, r + dr, s).unwrap() <= a + 1e-15);
        prop_assert!(chi_square_tail(n, r, s + ds).unwrap() >= a - 1e-15);
    }

    #[test]
    fn recursion_is_a_probability_and_monotone(t in 1usize..6, delta in 0.05f64..0.8, db in -3.0f64..8.0, split in any::<bool>()) {
        let spec = PredictorSpec::barnes_wall(2 << t, split).unwrap();
        let a = u_recursion(&spec, delta, db_to_linear(db)).unwrap();
        let b = u_recursion(&spec, delta, db_to_linear(db + 0.25)).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn delta_star_certificate(n in 2usize..40, s in 0.02f64..0.5, target in 1e-7f64..1e-1) {
        let n = 2 * n;
        let mode = DeltaStarMode::Regular { n, d: 4.0, eta: DEFAULT_ETA };
        if let Ok(d) = delta_star(&mode, s, 0.0, target) {
            prop_assert!(chi_square_tail(n, d * 4.0, s).unwrap() <= DEFAULT_ETA * target);
            if d >= 2e-4 {
                prop_assert!(chi_square_tail(n, (d - 2e-4) * 4.0, s).unwrap() > DEFAULT_ETA * target);
            }
        }
    }

    #[test]
    fn delta_star_shrinks_with_noise(s in 0.01f64..0.2, f in 0.1f64..0.9) {
        let mode = DeltaStarMode::Regular { n: 24, d: 4.0, eta: DEFAULT_ETA };
        let a = delta_star(&mode, s, 0.0, 1e-4).unwrap();
        let b = delta_star(&mode, s * f, 0.0, 1e-4).unwrap();
        prop_assert!(b <= a + 1e-4);
    }

    #[test]
    fn curves_are_monotone_when_data_is(db in -5.0f64..10.0) {
        let c = TabulatedCurve::leech_qmld();
        prop_assert!(c.eval_db(db + 0.1) <= c.eval_db(db));
    }
}
