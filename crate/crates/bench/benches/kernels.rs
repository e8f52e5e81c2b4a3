use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use dicke_core::classical::{integrate, ClassicalState, SampleTimes, Tolerances};
use dicke_core::ensembles::ginibre_eigenvalues;
use dicke_core::liouvillian::{build_liouvillian, build_liouvillian_tetradic};
use dicke_core::spectra::{sector_eigenvalues, sorted_by_modulus};
use dicke_core::stats::{cdf_ginue, cdf_ginue_table, complex_ratios, p_ginue, unfold};
use dicke_core::{ModelParams, Parity, Spin};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(n_max: usize) -> ModelParams {
    ModelParams::unit(2.0, 2.0, Spin::from_twice(2).unwrap(), n_max).unwrap()
}

fn liouvillian(c: &mut Criterion) {
    let p = params(10);
    c.bench_function("assemble kronecker n_max=10", |b| b.iter(|| build_liouvillian(black_box(&p)).unwrap()));
    c.bench_function("assemble tetradic n_max=10", |b| b.iter(|| build_liouvillian_tetradic(black_box(&p)).unwrap()));
    let p = params(6);
    c.bench_function("sector eigenvalues n_max=6", |b| {
        b.iter(|| sector_eigenvalues(black_box(&p), Parity::Positive, 4000).unwrap())
    });
}

fn statistics(c: &mut Criterion) {
    c.bench_function("GinUE density, direct sum", |b| b.iter(|| p_ginue(black_box(1.3), 200).unwrap()));
    c.bench_function("GinUE cdf, quadrature", |b| b.iter(|| cdf_ginue(black_box(1.3), 200).unwrap()));
    c.bench_function("GinUE cdf, table", |b| b.iter(|| cdf_ginue_table(black_box(1.3))));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let z = sorted_by_modulus(&ginibre_eigenvalues(1000, &mut rng).unwrap());
    c.bench_function("complex ratios N=1000", |b| b.iter(|| complex_ratios(black_box(&z)).unwrap()));
    c.bench_function("unfold k=30 N=1000", |b| b.iter(|| unfold(black_box(&z), 30).unwrap()));
    c.bench_function("ginibre N=200", |b| {
        b.iter_batched(|| ChaCha8Rng::seed_from_u64(2), |mut r| ginibre_eigenvalues(200, &mut r).unwrap(), BatchSize::SmallInput)
    });
}

fn dynamics(c: &mut Criterion) {
    let p = ModelParams::unit(1.0, 2.0, Spin::from_twice(2).unwrap(), 1).unwrap();
    let s0 = ClassicalState::new(0.0, 0.0, 0.001, 0.0, -1.0);
    c.bench_function("mean-field flow t=100", |b| {
        b.iter(|| integrate(&s0, black_box(&p), 100.0, Tolerances::default(), &SampleTimes::Uniform(100.0)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = liouvillian, statistics, dynamics
}
criterion_main!(benches);
