use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nform_core::control::{brunovsky_pair, control_complement, normalize_control, ControlSystem};
use nform_core::homological::{homological_matrix, split, LinearPart};
use nform_core::ode::normalize_ode;
use nform_core::polyalg::{int, monomial_basis};
use nform_core::{HomPolyMap, Matrix, Poly, PolySeries};

fn dense_map(dim_in: usize, dim_out: usize, k: u32) -> HomPolyMap {
    let comps = (0..dim_out)
        .map(|j| {
            Poly::from_terms(
                dim_in,
                monomial_basis(dim_in, k)
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| (m, int((i + j) as i64 % 5 - 2))),
            )
        })
        .collect();
    HomPolyMap::from_polys(k, comps).unwrap()
}

fn series(dim_in: usize, dim_out: usize, max: u32) -> PolySeries {
    let mut s = PolySeries::new(dim_in, dim_out, max);
    for k in 2..=max {
        s.set_term(dense_map(dim_in, dim_out, k)).unwrap();
    }
    s
}

fn shift(n: usize) -> LinearPart {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = int(1);
    }
    LinearPart::new(a).unwrap()
}

fn homological(c: &mut Criterion) {
    let mut g = c.benchmark_group("split");
    for (n, k) in [(2, 3), (3, 3), (3, 4), (4, 3)] {
        let a = shift(n);
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}k{k}")), &k, |b, &k| {
            b.iter(|| split(black_box(&a), k).unwrap())
        });
    }
    g.finish();

    let a = LinearPart::new(Matrix::from_i64(&[&[1, 2, 0, 1], &[0, -1, 3, 0], &[2, 0, 0, 1], &[1, 1, 1, 0]])).unwrap();
    let m = homological_matrix(&a, 4).unwrap().matrix;
    c.bench_function("rank dense 4x4 degree 4", |b| b.iter(|| black_box(&m).rank()));
}

fn normalization(c: &mut Criterion) {
    let tb = shift(2);
    let f = series(2, 2, 5);
    c.bench_function("normalize ode nilpotent order 5", |b| {
        b.iter(|| normalize_ode(black_box(&tb), &f, 5, None).unwrap())
    });

    let mut g = c.benchmark_group("normalize control");
    for n in [2, 3] {
        let sys = ControlSystem::new(brunovsky_pair(n).unwrap(), series(n + 1, n, 3)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &sys, |b, sys| {
            b.iter(|| normalize_control(black_box(sys), 3).unwrap())
        });
    }
    g.finish();

    let lin = brunovsky_pair(3).unwrap();
    c.bench_function("control complement n3 k3", |b| {
        b.iter(|| control_complement(black_box(&lin), 3).unwrap())
    });
}

criterion_group!(benches, homological, normalization);
criterion_main!(benches);
