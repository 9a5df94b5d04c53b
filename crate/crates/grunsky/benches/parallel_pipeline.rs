//! Criterion comparison of the data-parallel inner loops on a single-thread
//! pool against the default pool: the Beurling transform, a full Beltrami
//! solve, the moment quadrature, and the operator-norm sweep.
//!
//! With `--no-default-features` the crate falls back to plain loops and the
//! pool comparison is meaningless, so the bench bodies require `parallel`.

use criterion::{criterion_group, criterion_main, Criterion};

#[cfg(feature = "parallel")]
mod benches {
    use criterion::Criterion;
    use grunsky::beltrami::{
        beurling_transform, moment_matrix, solve_beltrami, BeltramiGrid, Grid,
    };
    use grunsky::grunsky::{grunsky_norm, CoeffSeries};
    use grunsky::Complex64;

    fn pools() -> [(&'static str, rayon::ThreadPool); 2] {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let all = rayon::ThreadPoolBuilder::new().build().unwrap();
        [("1-thread", single), ("all-threads", all)]
    }

    pub fn bench_beurling(c: &mut Criterion) {
        let mut group = c.benchmark_group("beurling_transform_m256");
        group.sample_size(10);
        let rho = Grid::from_fn(256, |z| {
            Complex64::new((3.0 * z.re).cos(), (2.0 * z.im).sin()) * (1.0 - z.norm_sqr())
        });
        for (name, pool) in pools() {
            group.bench_function(name, |b| {
                b.iter(|| pool.install(|| beurling_transform(&rho)))
            });
        }
        group.finish();
    }

    pub fn bench_solve(c: &mut Criterion) {
        let mut group = c.benchmark_group("solve_beltrami_m128_k04");
        group.sample_size(10);
        let mu = BeltramiGrid::constant(128, Complex64::new(0.4, 0.0)).unwrap();
        for (name, pool) in pools() {
            group.bench_function(name, |b| {
                b.iter(|| pool.install(|| solve_beltrami(&mu, 1e-8, None).unwrap()))
            });
        }
        group.finish();
    }

    pub fn bench_moments(c: &mut Criterion) {
        let mut group = c.benchmark_group("moment_matrix_m512_n16");
        group.sample_size(10);
        let g = Grid::from_fn(512, |z| z.conj() / z.norm() * 0.3);
        for (name, pool) in pools() {
            group.bench_function(name, |b| {
                b.iter(|| pool.install(|| moment_matrix(&g, 16)))
            });
        }
        group.finish();
    }

    pub fn bench_norm_sweep(c: &mut Criterion) {
        let mut group = c.benchmark_group("grunsky_norm_n24");
        group.sample_size(10);
        let f = CoeffSeries::from_real(
            &(0..=47)
                .map(|k| 0.3 / (1 + k * k) as f64)
                .collect::<Vec<_>>(),
        );
        group.bench_function("single", |b| {
            b.iter(|| grunsky_norm(&f, 24).unwrap())
        });
        group.finish();
    }
}

#[cfg(feature = "parallel")]
fn all(c: &mut Criterion) {
    benches::bench_beurling(c);
    benches::bench_solve(c);
    benches::bench_moments(c);
    benches::bench_norm_sweep(c);
}

#[cfg(not(feature = "parallel"))]
fn all(_c: &mut Criterion) {}

criterion_group!(pipeline, all);
criterion_main!(pipeline);
