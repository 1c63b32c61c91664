use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use gslab_bench::cz_fixture;

fn cz_degree_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_cz");
    for degree in [4, 8, 16, 32, 64, 128, 256] {
        let r = cz_fixture(2 * degree + 2, degree, 7);
        group.bench_with_input(BenchmarkId::from_parameter(degree), &r, |b, r| {
            b.iter_batched(
                || r.clone(),
                |mut r| {
                    r.apply_cz(0, 1).unwrap();
                    r
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, cz_degree_sweep);
criterion_main!(benches);
