use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use devbound_core::simulate::{enumerate_exact, mc_tail_estimate, DEFAULT_ENUMERATION_BUDGET};
use devbound_core::stats::binomial_log_tail;
use devbound_core::witness::optimality_certificate;
use devbound_core::{Alpha, Event, FiniteLaw, GeneratorSpec, TruncatedHeavy, WitnessDistribution};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_exact");
    for n in [12u32, 16, 20] {
        group.bench_with_input(BenchmarkId::new("rademacher-max", n), &n, |b, &n| {
            let event = Event::MaxAtLeast {
                level: (n / 2) as f64,
            };
            b.iter(|| enumerate_exact(&GeneratorSpec::Rademacher, n, &event, DEFAULT_ENUMERATION_BUDGET).unwrap())
        });
    }
    let spec = GeneratorSpec::ScaledBounded(FiniteLaw::three_point());
    let event = Event::JointVariance { level: 2.0, v: 2.0 };
    for n in [8u32, 12] {
        group.bench_with_input(BenchmarkId::new("three-point-joint", n), &n, |b, &n| {
            b.iter(|| enumerate_exact(&spec, n, &event, DEFAULT_ENUMERATION_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let alpha = Alpha::new(0.5).unwrap();
    let trials = 10_000;
    let mut group = c.benchmark_group("mc_tail_estimate");
    group.throughput(Throughput::Elements(trials));
    let specs = [
        GeneratorSpec::Rademacher,
        GeneratorSpec::TruncatedHeavy(TruncatedHeavy::new(alpha, 3.0).unwrap()),
        GeneratorSpec::StationaryWitness(WitnessDistribution::new(alpha)),
    ];
    for spec in &specs {
        let event = Event::MaxAtLeast { level: 16.0 };
        group.bench_function(spec.kind_name(), |b| {
            b.iter(|| mc_tail_estimate(spec, &event, 64, trials, 1, 1e-3).unwrap())
        });
    }
    group.finish();
}

fn binomial_tail(c: &mut Criterion) {
    let mut group = c.benchmark_group("binomial_log_tail");
    for n in [1_000u64, 1_000_000] {
        let s = (n as f64).powf(0.75);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| binomial_log_tail(black_box(n), black_box(s)))
        });
    }
    group.finish();
    c.bench_function("optimality_certificate/1e6", |b| {
        let alpha = Alpha::new(0.5).unwrap();
        b.iter(|| optimality_certificate(alpha, black_box(1_000_000)).unwrap())
    });
}

fn witness_quantile(c: &mut Criterion) {
    let w = WitnessDistribution::new(Alpha::new(0.5).unwrap());
    let mut group = c.benchmark_group("witness_quantile");
    for p in [1e-1, 1e-6, 1e-12] {
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| w.quantile(black_box(p)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, enumeration, monte_carlo, binomial_tail, witness_quantile);
criterion_main!(kernels);
