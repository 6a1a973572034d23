use latkit::constructions::*;
use latkit::lattice::{shortest_vectors, Provenance};

#[test]
fn leech_is_even_unimodular_min4() {
    let l = leech_turyn().unwrap();
    assert!(l.is_even() && l.is_unimodular());
    let (d, tau) = shortest_vectors(&l, VERIFY_NODES).unwrap();
    assert_eq!((d, tau), (4.0, 196_560));
}

#[test]
fn three_parity_leech_kissing() {
    let l = leech_turyn().unwrap();
    let k = kissing_3parity_leech(&l, VERIFY_NODES).unwrap();
    assert_eq!(k.single_block, 589_680);
    assert_eq!(k.two_block, 28_304_640);
    assert_eq!(k.partners_per_vector, vec![48]);
    assert_eq!(k.total, 28_894_320);
}

// The Z[λ]-structure induced by the Turyn basis polarises correctly but the
// resulting 72-dimensional lattice has norm-6 vectors.
#[test]
fn turyn_structure_gives_minimum_six() {
    let l = leech_turyn().unwrap();
    let nb = nebe(&l, VERIFY_NODES).unwrap();
    assert!(nb.report.passed());
    assert!(nb.lattice.is_even() && nb.lattice.is_unimodular());
    assert_eq!(nb.norm6, Some(1_008_000));
    let d = nb.lattice.min_sq_norm().unwrap();
    assert_eq!((d.value, d.provenance), (6.0, Provenance::Exact));

    let (_, ws) = n72_norm6_count(&nb.triple.s, VERIFY_NODES).unwrap();
    assert!(!ws.is_empty());
    for w in ws {
        let norm: f64 = w.iter().map(|x| x * x).sum();
        assert!((norm - 6.0).abs() < 1e-9);
        assert!(nb.lattice.contains_f64(&w, 1e-6));
    }
}

#[test]
fn e8_polarises() {
    let (triple, rep) = polarize(&e8_half_lambda(), VERIFY_NODES).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.min_norms, Some((1.0, 2.0, 2.0)));
    assert_eq!(rep.first_shells, Some((240, 240, 240)));
    // λS is E8 at the standard scale
    assert!(triple.t.same_lattice(&e8()));
}

#[test]
fn barnes_wall_chain() {
    let f = barnes_wall(32).unwrap();
    for (j, l) in f.levels.iter().enumerate().skip(1) {
        let mut l = l.clone();
        let n = l.dim();
        // vol(BW_n)^2 = 2^{n·t/2} for n = 2^{t+1}
        let want = num_rational::BigRational::from_integer(num_bigint::BigInt::from(1) << (n * j / 2));
        assert_eq!(l.volume_sq_exact(), latkit::exact::Surd { a: want, b: num_traits::Zero::zero() });
        if n <= 16 {
            let (d, _) = l.enumerate_min_norm(VERIFY_NODES).unwrap();
            assert_eq!(d, (1u64 << j) as f64);
        }
    }
}

#[test]
fn parity_minimum_is_min_of_v_and_twice_t() {
    let z = z2();
    let v = z.scale_rotate(latkit::Theta::Phi).unwrap();
    for k in 2..=4 {
        let mut l = parity_check_basis(&z, &v, k).unwrap();
        let (d, _) = l.enumerate_min_norm(VERIFY_NODES).unwrap();
        assert_eq!(d, 2.0f64.min(2.0 * 1.0));
    }
}

#[test]
fn leech_minimum_lies_in_king_bracket() {
    // S has d = 1, T = ψS and V = 2S give min{d(V), 2d(T), 3d(S)} = 3 ≤ 4 ≤ 4
    let l = leech_turyn().unwrap();
    let (d, _) = shortest_vectors(&l, VERIFY_NODES).unwrap();
    assert!(3.0 <= d && d <= 4.0f64.min(2.0 * 2.0));
}

mod membership {
    use latkit::constructions::*;
    use latkit::exact::Surd;
    use latkit::Theta;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parity_membership_agrees(k in 2usize..4, coeffs in prop::collection::vec(-3i64..4, 8), lattice_point in any::<bool>()) {
            let t = z2();
            let v = t.scale_rotate(Theta::Phi).unwrap();
            let l = parity_check_basis(&t, &v, k).unwrap();
            let n = 2 * k;
            let x: Vec<Surd> = if lattice_point {
                let mut x = vec![Surd::zero(); n];
                for (c, row) in coeffs.iter().zip(l.exact_rows()) {
                    for (a, b) in x.iter_mut().zip(row) {
                        *a = &*a + &(b * &Surd::int(*c));
                    }
                }
                x
            } else {
                coeffs.iter().cycle().take(n).map(|&c| Surd::int(c)).collect()
            };
            prop_assert_eq!(parity_member(&t, &v, k, &x), l.contains_exact(&x));
            if lattice_point {
                prop_assert!(l.contains_exact(&x));
            }
        }
    }
}
