use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;

use idemat_core::catalog;
use idemat_core::factor::factorize;
use idemat_core::iso::automorphisms;
use idemat_core::lattice::{product, FiniteLattice};
use idemat_core::matrix::{check_invertible, invert, ResMatrix};
use idemat_core::oracle::{oracle_inverse, oracle_is_invertible};
use idemat_core::random::{random_invertible, seeded_rng};
use idemat_core::resmap::ResiduatedMap;

fn lattices() -> Vec<(&'static str, FiniteLattice)> {
    let c2 = catalog::lattice("chain2").unwrap();
    let m3 = catalog::lattice("m3").unwrap();
    vec![
        ("square", catalog::lattice("square").unwrap()),
        ("m3", m3.clone()),
        ("cube", catalog::lattice("cube").unwrap()),
        ("chain2xm3", product(&[c2, m3]).source().clone()),
    ]
}

fn random_matrix(l: &Arc<FiniteLattice>, maps: &[ResiduatedMap], n: usize, seed: u64) -> ResMatrix {
    let mut rng = seeded_rng(seed);
    let entries = (0..n * n).map(|_| maps[rng.gen_range(0..maps.len())].clone()).collect();
    ResMatrix::new(l, n, entries).unwrap()
}

fn check_vs_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    for (name, l) in lattices() {
        let l = Arc::new(l);
        let f = Arc::new(factorize(&l));
        let unit = random_invertible(&f, 2, &mut seeded_rng(1));
        let maps = ResiduatedMap::enumerate(&l);
        let any = random_matrix(&l, &maps, 2, 2);
        for (kind, m) in [("invertible", &unit), ("random", &any)] {
            group.bench_with_input(BenchmarkId::new(format!("structural/{kind}"), name), m, |b, m| {
                b.iter(|| check_invertible(black_box(m), &f).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("oracle/{kind}"), name), m, |b, m| {
                b.iter(|| oracle_is_invertible(black_box(m)).unwrap())
            });
        }
    }
    group.finish();
}

fn inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse");
    for (name, l) in lattices() {
        let f = Arc::new(factorize(&l));
        let m = random_invertible(&f, 2, &mut seeded_rng(3));
        let cert = check_invertible(&m, &f).unwrap().unwrap();
        group.bench_with_input(BenchmarkId::new("structural", name), &m, |b, m| {
            b.iter(|| invert(black_box(m), &cert).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle", name), &m, |b, m| {
            b.iter(|| oracle_inverse(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn structure(c: &mut Criterion) {
    let m3 = catalog::lattice("m3").unwrap();
    let big = product(&[catalog::lattice("chain2").unwrap(), m3.clone(), m3]).source().clone();
    let cube = catalog::lattice("cube").unwrap();
    c.bench_function("factorize/chain2xm3xm3", |b| b.iter(|| factorize(black_box(&big))));
    c.bench_function("factorize/cube", |b| b.iter(|| factorize(black_box(&cube))));
    c.bench_function("automorphisms/chain2xm3xm3", |b| b.iter(|| automorphisms(black_box(&big))));
}

criterion_group!(benches, check_vs_oracle, inverse, structure);
criterion_main!(benches);
