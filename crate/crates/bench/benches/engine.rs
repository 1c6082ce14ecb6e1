use criterion::{criterion_group, criterion_main, Criterion};
use normcomb::dyadic::square_class_of;
use normcomb::replay::{replay, ReplayOptions};
use normcomb::Dyadic;
use std::hint::black_box;

fn derivation(c: &mut Criterion) {
    let opts = ReplayOptions { samples: 0, ..Default::default() };
    let mut g = c.benchmark_group("replay");
    g.sample_size(10);
    g.bench_function("lemma-4.4", |b| b.iter(|| replay(black_box("lemma-4.4"), &opts).unwrap()));
    g.bench_function("lemma-4.8", |b| b.iter(|| replay(black_box("lemma-4.8"), &opts).unwrap()));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let opts = ReplayOptions { samples: 1000, ..Default::default() };
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("lemma-4.4 with 1000 samples", |b| b.iter(|| replay("lemma-4.4", &opts).unwrap()));
    g.finish();
    let x = Dyadic::new(3, 0x5555_5555_5555_5555, 64).unwrap();
    c.bench_function("square_class_of", |b| b.iter(|| square_class_of(black_box(&x)).unwrap()));
}

criterion_group!(benches, derivation, oracle);
criterion_main!(benches);
