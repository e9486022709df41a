use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qsteer_bench::{ghz_density, sample_model, sample_scenario, tilted_pairs};
use qsteer_core::{
    depolarized_ghz, l_value, model_l_value, search_max, ImprecisionParam, SignPattern,
};

fn bench_kron_chain(c: &mut Criterion) {
    let pairs = tilted_pairs(6, 0.02);
    c.bench_function("kron_chain_n6", |b| {
        b.iter(|| {
            let mut op = qsteer_core::f_operator(&pairs[0], qsteer_core::Sign::Plus);
            for pair in &pairs[1..] {
                op = op.kron(&qsteer_core::f_operator(pair, qsteer_core::Sign::Plus));
            }
            black_box(op)
        })
    });
}

fn bench_l_value(c: &mut Criterion) {
    let rho = ghz_density(6);
    let pairs = tilted_pairs(6, 0.02);
    let pattern = SignPattern::all_plus(6).unwrap();
    c.bench_function("l_value_n6", |b| {
        b.iter(|| black_box(l_value(&rho, &pairs, &pattern).unwrap()))
    });
}

fn bench_eigenvalues(c: &mut Criterion) {
    let rho = depolarized_ghz(5, 0.3).unwrap();
    c.bench_function("hermitian_eigenvalues_dim32", |b| {
        b.iter(|| black_box(rho.hermitian_eigenvalues().unwrap()))
    });
}

fn bench_model_l_value(c: &mut Criterion) {
    let s = sample_scenario(4, 2, 0.05);
    let model = sample_model(&s, 4, 11);
    let pairs = s.device_pairs();
    let pattern = SignPattern::all_plus(4).unwrap();
    c.bench_function("model_l_value_n4", |b| {
        b.iter(|| black_box(model_l_value(&model, &s, &pairs, &pattern).unwrap()))
    });
}

fn bench_search(c: &mut Criterion) {
    let s = sample_scenario(2, 1, 0.05);
    let eps = ImprecisionParam::new(0.05).unwrap();
    c.bench_function("search_max_256", |b| {
        b.iter(|| black_box(search_max(&s, eps, 256, 2, 3).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_kron_chain,
    bench_l_value,
    bench_eigenvalues,
    bench_model_l_value,
    bench_search
);
criterion_main!(benches);
