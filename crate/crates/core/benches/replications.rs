use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gai_core::harness::{builtin_scenario, replicate_sequential};
use gai_core::{RunConfig, Strategy};

const RUNS: u64 = 64;

fn replications(c: &mut Criterion) {
    let scenario = builtin_scenario("threshold1").unwrap();
    let config = RunConfig::new(0.05).burn_in(5);
    let mut group = c.benchmark_group("threshold1_replications");
    group.sample_size(10);
    for strategy in Strategy::ALL {
        group.bench_with_input(
            BenchmarkId::new("sequential", strategy),
            &strategy,
            |b, &s| b.iter(|| replicate_sequential(&scenario, s, &config, 0, RUNS).unwrap()),
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(
            BenchmarkId::new("parallel", strategy),
            &strategy,
            |b, &s| {
                b.iter(|| {
                    gai_core::harness::replicate_parallel(&scenario, s, &config, 0, RUNS).unwrap()
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, replications);
criterion_main!(benches);
