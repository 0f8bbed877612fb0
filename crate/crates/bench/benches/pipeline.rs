use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gaudin_bench::{config, spec, INSTANCES};
use gaudin_core::algebra::{build_embedded_module, dimension_oracle};
use gaudin_core::bae::{base_level, levels, newton_solve, weight_function, NewtonOptions};
use gaudin_core::bethe::build_bethe_operator;
use gaudin_core::harness::{run, Command};
use gaudin_core::quasiexp::{fundamental_data, QuasiExpSpace};
use gaudin_core::scalar::{rat, Rat, Scalar};
use gaudin_core::spectral::{joint_diagonalize, SpectralOptions};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bethe_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("bethe_operator");
    for &(name, json) in INSTANCES {
        let s = spec(json);
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| {
                let module = build_embedded_module(s).unwrap();
                build_bethe_operator(black_box(&module)).unwrap()
            })
        });
    }
    group.finish();
}

fn diagonalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("joint_diagonalize");
    for &(name, json) in INSTANCES {
        let s = spec(json);
        let op = build_bethe_operator(&build_embedded_module(&s).unwrap()).unwrap();
        let opts = SpectralOptions::default();
        group.bench_function(name, |b| b.iter(|| joint_diagonalize(black_box(&op), s.b(), &opts).unwrap()));
    }
    group.finish();
}

fn bethe_ansatz(c: &mut Criterion) {
    let mut group = c.benchmark_group("newton_solve");
    group.sample_size(10);
    for &(name, json) in INSTANCES.iter().filter(|(_, j)| spec(j).is_vector_case()) {
        let s = spec(json);
        let base = base_level(&s).unwrap();
        let k: Vec<Complex64> = s.k().iter().map(Scalar::to_c64).collect();
        let sizes = levels(s.rank(), s.weight());
        let expected = dimension_oracle(&s) as usize;
        let opts = NewtonOptions::default();
        group.bench_function(name, |b| b.iter(|| newton_solve(&base, &k, &sizes, expected, &opts).unwrap()));
    }
    group.finish();
}

fn quasi_exponentials(c: &mut Criterion) {
    let mut group = c.benchmark_group("fundamental_data");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for degrees in [[2usize, 1, 0], [3, 2, 1], [4, 3, 2]] {
        let k = vec![rat(0, 1), rat(1, 2), rat(-3, 1)];
        let x = QuasiExpSpace::random(k, &degrees, &mut rng).unwrap();
        group.bench_function(format!("{degrees:?}"), |b| b.iter(|| fundamental_data(black_box(&x)).unwrap()));
    }
    group.finish();

    let levels: Vec<Vec<Rat>> = vec![
        (0..4).map(Rat::from_i64).collect(),
        vec![rat(11, 2), rat(13, 3), rat(17, 5)],
        vec![rat(23, 7), rat(29, 3)],
        vec![rat(31, 4)],
    ];
    c.bench_function("weight_function/gl4_n4", |b| b.iter(|| weight_function(4, black_box(&levels)).unwrap()));
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for &(name, json) in INSTANCES {
        let cfg = config(json);
        group.bench_function(name, |b| b.iter(|| run(Command::Verify, black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bethe_operator, diagonalize, bethe_ansatz, quasi_exponentials, end_to_end);
criterion_main!(benches);
