use criterion::{black_box, criterion_group, criterion_main, Criterion};
use orbita_bench::{lambert_instance, rotated_instance};
use orbita_core::best_rotated_transfer;
use orbita_core::hohmann::{all_branches, HohmannInput};
use orbita_core::lambert::solve_general;
use orbita_core::rotated::{case2a_pipeline, case2b_pipeline};

fn hohmann(c: &mut Criterion) {
    let inp = HohmannInput::from_radii(1.0, 2.0, 1, -1).unwrap();
    c.bench_function("hohmann_all_branches", |b| {
        b.iter(|| all_branches(black_box(&inp)))
    });
}

fn lambert(c: &mut Criterion) {
    let f = lambert_instance();
    c.bench_function("lambert_general", |b| {
        b.iter(|| solve_general(black_box(&f)).unwrap())
    });
}

fn rotated(c: &mut Criterion) {
    let inp = rotated_instance();
    let mut g = c.benchmark_group("rotated");
    g.sample_size(10);
    g.bench_function("case2a_pipeline", |b| {
        b.iter(|| case2a_pipeline(black_box(&inp.s0x), black_box(&inp.s0y)).unwrap())
    });
    g.bench_function("case2b_pipeline", |b| {
        b.iter(|| case2b_pipeline(black_box(&inp.s0x), black_box(&inp.s0y)).unwrap())
    });
    g.bench_function("best_rotated_transfer", |b| {
        b.iter(|| best_rotated_transfer(black_box(&inp)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, hohmann, lambert, rotated);
criterion_main!(benches);
