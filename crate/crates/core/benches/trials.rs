use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latkit::decoders::{ListConfig, Strategy};
use latkit::family::Family;
use latkit::par::Exec;
use latkit::sim::{run_with, SimPlan, StopRule};

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("bw16-bdd-4096-trials");
    group.sample_size(10);
    let h = Family::BarnesWall(16).handle(Strategy::ParityBdd, ListConfig::regular(0.25)).unwrap();
    let mut plan = SimPlan::new(vec![3.0], 2f64.powf(1.5), 1);
    plan.stop = StopRule { min_errors: u64::MAX, max_trials: 4096 };
    plan.batch = 1024;
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| run_with(&plan, &h, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
