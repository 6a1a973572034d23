use latkit::analysis::chi_square_tail;
use latkit::decoders::{ListConfig, Strategy};
use latkit::family::Family;
use latkit::lattice::q_func;
use latkit::par::{self, Exec};
use latkit::sim::*;

fn fixed(trials: u64) -> StopRule {
    StopRule { min_errors: u64::MAX, max_trials: trials }
}

#[test]
fn integer_lattice_matches_closed_form() {
    let h = Family::Integer(1).handle(Strategy::SphereEnum, ListConfig::regular(0.25)).unwrap();
    let mut p = SimPlan::new(vec![-1.0, 1.0, 3.0], 1.0, 99);
    p.stop = fixed(200_000);
    for pt in run(&p, &h).unwrap().points {
        let exact = 2.0 * q_func(0.5 / pt.sigma_sq.sqrt());
        assert!(pt.ci_lo <= exact && exact <= pt.ci_hi, "{} dB: {} not in [{}, {}]", pt.vnr_db, exact, pt.ci_lo, pt.ci_hi);
    }
}

#[test]
fn same_seed_same_result_any_schedule() {
    let h = Family::BarnesWall(8).handle(Strategy::ParityBdd, ListConfig::regular(0.25)).unwrap();
    let mut p = SimPlan::new(vec![0.0, 2.0], 2.0, 4);
    p.stop = StopRule { min_errors: 50, max_trials: 20_000 };
    p.batch = 512;
    let a = run_with(&p, &h, Exec::Sequential).unwrap();
    let b = par::with_threads(Some(3), || run_with(&p, &h, Exec::Parallel)).unwrap();
    let strip = |mut r: SimResult| {
        r.points.iter_mut().for_each(|q| q.wall_time = 0.0);
        r
    };
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(strip(a), strip(b));
    let first = run(&p, &h).unwrap().to_csv();
    p.seed = 5;
    assert_ne!(run(&p, &h).unwrap().to_csv(), first);
}

#[test]
fn regular_list_misses_match_chi_square() {
    let f = Family::Checkerboard(4);
    let delta = 0.6;
    let h = f.handle(Strategy::ParityList, ListConfig::regular(delta)).unwrap();
    let mut p = SimPlan::new(vec![0.0, 1.5], 2f64.sqrt(), 17);
    p.event = Event::NotInList;
    p.stop = fixed(60_000);
    for pt in run(&p, &h).unwrap().points {
        let f = chi_square_tail(4, delta * 2.0, pt.sigma_sq).unwrap();
        let se = (f * (1.0 - f) / pt.trials as f64).sqrt();
        assert!((pt.pe - f).abs() < 3.0 * se, "{}: {} vs {f}", pt.vnr_db, pt.pe);
    }
}

#[test]
fn sending_other_points_changes_nothing() {
    let f = Family::BarnesWall(8);
    let l = f.build(0).unwrap();
    let h = f.handle(Strategy::BwRecursiveBdd, ListConfig::regular(0.25)).unwrap();
    let mut p = SimPlan::new(vec![1.5], 2.0, 8);
    p.stop = fixed(40_000);
    let zero = run(&p, &h).unwrap().points[0].errors as f64;
    p.seed = 9;
    p.transmit = Transmit::Random { generator: l.generator().to_vec(), range: 5 };
    let moved = run(&p, &h).unwrap().points[0].errors as f64;
    // two-sample chi-square on equal trial counts, 5% level
    let n = 40_000.0;
    let pooled = (zero + moved) / (2.0 * n);
    let stat = (zero - moved).powi(2) / (2.0 * n * pooled * (1.0 - pooled));
    assert!(stat < 3.841, "statistic {stat}");
}

#[test]
fn noise_free_limit_has_no_errors() {
    let h = Family::BarnesWall(16).handle(Strategy::BwRecursiveBdd, ListConfig::regular(0.25)).unwrap();
    let mut p = SimPlan::new(vec![15.0], 2f64.powf(1.5), 1);
    p.stop = fixed(5_000);
    assert_eq!(run(&p, &h).unwrap().points[0].errors, 0);
}

#[test]
fn decoder_failures_carry_the_trial() {
    let h = Family::Leech.handle(Strategy::SphereEnum, ListConfig::regular(0.5)).unwrap();
    let mut p = SimPlan::new(vec![0.0], 1.0, 1);
    p.max_nodes = 5;
    p.stop = fixed(10);
    match run(&p, &h) {
        Err(e @ latkit::Error::Trial { grid: 0, .. }) => assert!(e.is_budget()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn csv_layout() {
    let h = Family::Integer(2).handle(Strategy::SphereEnum, ListConfig::regular(0.25)).unwrap();
    let mut p = SimPlan::new(vec![0.0], 1.0, 1);
    p.stop = fixed(100);
    let csv = run(&p, &h).unwrap().to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("vnr_db,trials,errors,pe,ci_lo,ci_hi,mean_calls"));
    assert_eq!(lines.next().unwrap().split(',').count(), 7);
}
