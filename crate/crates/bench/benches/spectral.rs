use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphkms::fixture::{example_graph, Profile};
use graphkms::{
    a_beta, beta_c, build_representation, census, classify, components, spectral_radius,
};
use graphkms_bench::ring_with_chords;

fn radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_radius");
    for n in [8, 32, 64] {
        let b = a_beta(&ring_with_chords(n), 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &b, |bench, b| {
            bench.iter(|| spectral_radius(black_box(b)).unwrap())
        });
    }
    group.finish();
}

fn critical_beta(c: &mut Criterion) {
    let g = ring_with_chords(64);
    let comp = components(&g).remove(0);
    c.bench_function("beta_c ring 64", |b| {
        b.iter(|| beta_c(black_box(&g), &comp).unwrap())
    });
}

fn fixture(c: &mut Criterion) {
    for profile in Profile::ALL {
        let g = example_graph(profile);
        c.bench_function(&format!("classify {}", profile.name()), |b| {
            b.iter(|| classify(black_box(&g)).unwrap())
        });
        c.bench_function(&format!("census {}", profile.name()), |b| {
            b.iter(|| census(black_box(&g)).unwrap())
        });
    }
    let g = example_graph(Profile::Gauge);
    c.bench_function("trace representation", |b| {
        b.iter(|| build_representation(black_box(&g)).unwrap())
    });
}

criterion_group!(benches, radius, critical_beta, fixture);
criterion_main!(benches);
