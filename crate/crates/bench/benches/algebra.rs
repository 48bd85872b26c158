use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jetsplit::{depth_one_decompose, jacobi_bracket, FloatHamiltonian, RationalHamiltonian};

fn brackets(c: &mut Criterion) {
    let f: RationalHamiltonian = "x^2*u*p^2 - 3/4*u^2*p + x*p^3".parse().unwrap();
    let g: RationalHamiltonian = "u*p^2 + 1/2*x^2*p - u^2".parse().unwrap();
    let (ff, gf) = (f.to_float(), g.to_float());
    c.bench_function("jacobi bracket (rational)", |b| {
        b.iter(|| jacobi_bracket(black_box(&f), black_box(&g)))
    });
    c.bench_function("jacobi bracket (float)", |b| {
        b.iter(|| jacobi_bracket(black_box(&ff), black_box(&gf)))
    });
}

fn decomposition(c: &mut Criterion) {
    let h: RationalHamiltonian = "x*p^4 + u^2*p^3 - 2*x*u*p^2 + p + x^2".parse().unwrap();
    let hf: FloatHamiltonian = h.to_float();
    c.bench_function("depth-one decomposition (rational)", |b| {
        b.iter(|| depth_one_decompose(black_box(&h)))
    });
    c.bench_function("depth-one decomposition (float)", |b| {
        b.iter(|| depth_one_decompose(black_box(&hf)))
    });
}

criterion_group!(benches, brackets, decomposition);
criterion_main!(benches);
