use latkit::analysis::johnson_bound;
use latkit::decoders::{Candidate, DecoderHandle, ListConfig, Strategy};
use latkit::family::Family;
use latkit::LatticeBasis;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn combine(l: &LatticeBasis, z: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; l.dim()];
    for (zk, g) in z.iter().zip(l.generator()) {
        for (a, b) in y.iter_mut().zip(g) {
            *a += zk * b;
        }
    }
    y
}

/// Half uniform in a fundamental cell, half lattice points plus box noise
/// on the scale of the radius.
fn queries(l: &LatticeBasis, radius_sq: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = l.dim();
    (0..count)
        .map(|q| {
            if q % 2 == 0 {
                let z: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                combine(l, &z)
            } else {
                let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-2..3) as f64).collect();
                let s = (radius_sq / n as f64).sqrt();
                combine(l, &z).into_iter().map(|v| v + s * rng.gen_range(-1.5..1.5)).collect()
            }
        })
        .collect()
}

fn same_points(a: &[Candidate], b: &[Candidate]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.point.iter().zip(&q.point).all(|(u, v)| (u - v).abs() < 1e-6))
}

fn list_handles(f: Family, delta: f64) -> Vec<DecoderHandle> {
    let mut hs = Vec::new();
    for &s in f.strategies() {
        if !s.is_list() || s == Strategy::SphereEnum || s == Strategy::LeechCvp {
            continue;
        }
        hs.push(f.handle(s, ListConfig::regular(delta)).unwrap());
        if matches!(s, Strategy::ParityListSplit | Strategy::RecursiveList) {
            hs.push(f.handle(s, ListConfig { split1: true, split2: true, ..ListConfig::regular(delta) }).unwrap());
        }
    }
    hs
}

#[test]
fn regular_lists_equal_enumeration() {
    for (name, deltas) in [("d4", &[0.2, 0.5, 0.75][..]), ("bw8", &[0.3, 0.75]), ("bw16", &[0.3, 0.5]), ("leech", &[0.3])] {
        let f = Family::parse(name).unwrap();
        let l = f.build(0).unwrap();
        for &delta in deltas {
            let oracle = f.handle(Strategy::SphereEnum, ListConfig::regular(delta)).unwrap();
            for h in list_handles(f, delta) {
                for y in queries(&l, oracle.radius_sq(), 40, 3) {
                    let a = oracle.decode(&y, u64::MAX).unwrap();
                    let b = h.decode(&y, u64::MAX).unwrap();
                    assert!(same_points(&a.candidates, &b.candidates), "{name} δ={delta} {} split2={}", h.strategy, h.cfg.split2);
                }
            }
        }
    }
}

#[test]
fn list_sizes_respect_johnson_bound() {
    let f = Family::BarnesWall(16);
    let l = f.build(0).unwrap();
    for delta in [0.25, 0.3, 25.0 / 64.0, 0.45] {
        let h = f.handle(Strategy::SphereEnum, ListConfig::regular(delta)).unwrap();
        let bound = johnson_bound(16, delta).unwrap() as usize;
        for y in queries(&l, h.radius_sq(), 60, 9) {
            assert!(h.decode(&y, u64::MAX).unwrap().candidates.len() <= bound);
        }
    }
}

#[test]
fn leech_cvp_finds_the_closest_point() {
    let f = Family::Leech;
    let l = f.build(0).unwrap();
    let cvp = f.handle(Strategy::LeechCvp, ListConfig::default()).unwrap();
    let oracle = f.handle(Strategy::SphereEnum, ListConfig::regular(0.5)).unwrap();
    for y in queries(&l, 2.0, 20, 5) {
        let a = oracle.decode(&y, u64::MAX).unwrap();
        let b = cvp.decode(&y, u64::MAX).unwrap();
        assert!((a.nearest().unwrap().dist_sq - b.nearest().unwrap().dist_sq).abs() < 1e-9);
    }
}

/// Points within the packing radius of a random lattice point.
fn inside_packing(l: &LatticeBasis, d: f64, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = l.dim();
    let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..4) as f64).collect();
    let x = combine(l, &z);
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let nw = w.iter().map(|a| a * a).sum::<f64>().sqrt();
    let rad = (d / 4.0).sqrt() * rng.gen::<f64>().powf(1.0 / n as f64) * (1.0 - 1e-9);
    let y = x.iter().zip(&w).map(|(a, b)| a + b / nw * rad).collect();
    (x, y)
}

#[test]
fn bdd_decodes_inside_packing_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, s) in [
        ("d4", Strategy::ParityBdd),
        ("bw16", Strategy::ParityBdd),
        ("bw32", Strategy::BwRecursiveBdd),
        ("e8", Strategy::BwRecursiveBdd),
        ("leech", Strategy::KingBdd),
    ] {
        let f = Family::parse(name).unwrap();
        let l = f.build(0).unwrap();
        let h = f.handle(s, ListConfig::regular(0.25)).unwrap();
        for _ in 0..300 {
            let (x, y) = inside_packing(&l, h.min_sq_norm(), &mut rng);
            let got = h.decode(&y, u64::MAX).unwrap();
            assert!(got.contains(&x, 1e-6) && got.candidates.len() == 1, "{name} {s}");
        }
    }
}

#[test]
fn recursive_bdd_call_counts() {
    for t in 1..=5u32 {
        let n = 2usize << t;
        let h = Family::BarnesWall(n).handle(Strategy::BwRecursiveBdd, ListConfig::regular(0.25)).unwrap();
        let out = h.decode(&vec![0.1; n], u64::MAX).unwrap();
        assert_eq!(out.counters.base_calls, 4u64.pow(t), "BW{n}");
    }
    let h = Family::Leech.handle(Strategy::KingBdd, ListConfig::regular(0.25)).unwrap();
    let out = h.decode(&[0.05; 24], u64::MAX).unwrap();
    assert_eq!(out.counters.base_calls, 16 * 6 * 16);
}

#[test]
fn decode_rejects_bad_points() {
    let h = Family::BarnesWall(8).handle(Strategy::ParityBdd, ListConfig::regular(0.25)).unwrap();
    assert!(h.decode(&[0.0; 7], u64::MAX).is_err());
    let mut y = vec![0.0; 8];
    y[2] = f64::NAN;
    assert!(h.decode(&y, u64::MAX).is_err());
}

#[test]
fn enumeration_budget_is_reported() {
    let h = Family::Leech.handle(Strategy::SphereEnum, ListConfig::regular(0.5)).unwrap();
    let err = h.decode(&[0.3; 24], 10).unwrap_err();
    assert!(err.is_budget());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modified_list_contains_regular_list(seed in any::<u64>(), delta in 0.2f64..0.6) {
        let f = Family::BarnesWall(16);
        let l = f.build(0).unwrap();
        let reg = f.handle(Strategy::RecursiveList, ListConfig::regular(delta)).unwrap();
        let modi = f.handle(Strategy::RecursiveList, ListConfig { bdd_floor: false, ..ListConfig::modified(delta) }).unwrap();
        for y in queries(&l, reg.radius_sq(), 4, seed) {
            let a = reg.decode(&y, u64::MAX).unwrap();
            let b = modi.decode(&y, u64::MAX).unwrap();
            for c in &a.candidates {
                prop_assert!(b.contains(&c.point, 1e-6));
            }
        }
    }

    #[test]
    fn outputs_are_sorted_lattice_points(seed in any::<u64>(), delta in 0.1f64..0.8) {
        let f = Family::Checkerboard(6);
        let l = f.build(0).unwrap();
        let h = f.handle(Strategy::ParityList, ListConfig::regular(delta)).unwrap();
        for y in queries(&l, h.radius_sq(), 4, seed) {
            let out = h.decode(&y, u64::MAX).unwrap();
            for w in out.candidates.windows(2) {
                prop_assert!(w[0].dist_sq <= w[1].dist_sq + 1e-9);
            }
            for c in &out.candidates {
                prop_assert!(l.contains_f64(&c.point, 1e-6));
                prop_assert!(c.dist_sq <= h.radius_sq() * (1.0 + 1e-9) + 1e-12);
            }
        }
    }
}
