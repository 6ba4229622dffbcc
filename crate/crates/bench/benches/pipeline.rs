use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use relquiv_core::{
    build_extension, fixtures, gen_random_string_tree, new_arrows, ExtensionMode, Oracle,
    RandomSpec,
};

fn fixture_arrows(c: &mut Criterion) {
    let mut g = c.benchmark_group("new_arrows");
    for (name, p) in fixtures::all() {
        g.bench_function(name, |b| b.iter(|| new_arrows(black_box(&p))));
    }
    g.finish();
}

fn fixture_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    for (name, p) in fixtures::all() {
        g.bench_function(name, |b| {
            b.iter(|| Oracle::new(black_box(&p)).new_arrow_multiset())
        });
    }
    g.finish();
}

fn extension(c: &mut Criterion) {
    let e = fixtures::fix_e();
    let cpx = fixtures::fix_c();
    c.bench_function("extend/fix-e/tensor", |b| {
        b.iter(|| build_extension(black_box(&e), ExtensionMode::Tensor).unwrap())
    });
    c.bench_function("extend/fix-e/trivial", |b| {
        b.iter(|| build_extension(black_box(&e), ExtensionMode::Trivial).unwrap())
    });
    c.bench_function("extend/fix-c/tensor", |b| {
        b.iter(|| build_extension(black_box(&cpx), ExtensionMode::Tensor).unwrap())
    });
}

fn random_trees(c: &mut Criterion) {
    let mut g = c.benchmark_group("random");
    for n in [8usize, 16, 32] {
        let p = gen_random_string_tree(
            0x5eed + n as u64,
            RandomSpec {
                vertices: n,
                relation_density: 0.6,
                gentle: false,
            },
        )
        .unwrap();
        g.bench_function(format!("new_arrows/{n}"), |b| {
            b.iter(|| new_arrows(black_box(&p)))
        });
        g.bench_function(format!("oracle/{n}"), |b| {
            b.iter(|| Oracle::new(black_box(&p)).new_arrow_multiset())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    fixture_arrows,
    fixture_oracle,
    extension,
    random_trees
);
criterion_main!(benches);
