use std::hint::black_box;

use cbf_bench::table_one;
use cbf_core::experiments::{run_sweep, GridRange, Measure, Scenario, SweepSpec};
use cbf_core::measures::{self, generic};
use cbf_core::{to_generic, QuadratureConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn pair(c: &mut Criterion) {
    let [a, b, ..] = table_one();
    let mut g = c.benchmark_group("pair");
    for n in [128, 512] {
        let cfg = QuadratureConfig::default().with_points(n).with_doublings(0);
        g.bench_with_input(BenchmarkId::new("inc_strict", n), &cfg, |bch, cfg| {
            bch.iter(|| measures::inc_strict(black_box(&a), black_box(&b), cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("inc_partial", n), &cfg, |bch, cfg| {
            bch.iter(|| measures::inc_partial(black_box(&a), black_box(&b), cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("inc_partial_rev", n), &cfg, |bch, cfg| {
            bch.iter(|| measures::inc_partial_rev(black_box(&a), black_box(&b), cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("scalar_product", n), &cfg, |bch, cfg| {
            bch.iter(|| measures::scalar_product(black_box(&a), black_box(&b), cfg).unwrap())
        });
    }
    g.finish();
}

fn generic_path(c: &mut Criterion) {
    let [a, b, ..] = table_one();
    let (ga, gb) = (to_generic(&a), to_generic(&b));
    let cfg = QuadratureConfig::default_4d();
    let mut g = c.benchmark_group("generic");
    g.sample_size(10);
    g.bench_function("inc_strict", |bch| {
        bch.iter(|| generic::inc_strict(&ga, &gb, &cfg).unwrap())
    });
    g.bench_function("inc_partial", |bch| {
        bch.iter(|| generic::inc_partial(&ga, &gb, &cfg).unwrap())
    });
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec {
        mu2: GridRange::new(0.0, 2.0, 0.5).unwrap(),
        sigma2: GridRange::new(0.5, 2.0, 0.5).unwrap(),
        ..SweepSpec::default_grid()
    };
    let s = Scenario::sweep(spec, Measure::IncPar);
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("incpar_5x4", |bch| bch.iter(|| run_sweep(&s).unwrap()));
    g.finish();
}

criterion_group!(benches, pair, generic_path, sweep);
criterion_main!(benches);
