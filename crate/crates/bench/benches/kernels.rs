use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use forest_spectra::{build_families, complete_bipartite_graph, complete_graph, enumerate_forests, slp_check, tilde_hessian};
use forest_spectra_bench::{hessian_cases, slp_cases};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_forests");
    for n in [5usize, 6, 7] {
        let g = complete_graph(n).unwrap();
        group.bench_with_input(BenchmarkId::new("K_n/k2", n), &g, |b, g| {
            b.iter(|| enumerate_forests(g, 2).unwrap().len())
        });
    }
    group.finish();
}

fn hessians(c: &mut Criterion) {
    let mut group = c.benchmark_group("tilde_hessian");
    group.sample_size(20);
    for (name, g, k) in hessian_cases() {
        group.bench_function(name, |b| b.iter(|| tilde_hessian(&g, k).unwrap()));
    }
    group.finish();
}

fn bijections(c: &mut Criterion) {
    let mut group = c.benchmark_group("bijections");
    group.sample_size(10);
    let k33 = complete_bipartite_graph(3, 3).unwrap();
    group.bench_function("K33/k2", |b| {
        b.iter(|| {
            let fam = build_families(&k33, 2).unwrap();
            fam.records().iter().all(|r| r.is_verified())
        })
    });
    let k6 = complete_graph(6).unwrap();
    group.bench_function("K6/k2", |b| {
        b.iter(|| {
            let fam = build_families(&k6, 2).unwrap();
            fam.records().iter().all(|r| r.is_verified())
        })
    });
    group.finish();
}

fn lefschetz(c: &mut Criterion) {
    let mut group = c.benchmark_group("slp_check");
    group.sample_size(10);
    for (name, phi, ones) in slp_cases() {
        group.bench_function(name, |b| b.iter(|| slp_check(&phi, &ones).unwrap().is_strong_lefschetz()));
    }
    group.finish();
}

criterion_group!(benches, enumeration, hessians, bijections, lefschetz);
criterion_main!(benches);
