use criterion::{criterion_group, criterion_main, Criterion};
use mcharlier::fock::{self, make_hamiltonian, state_u};
use mcharlier_bench::params;

fn operators(c: &mut Criterion) {
    let p = params(2);
    let d = 8;
    let h = make_hamiltonian(0, &p).unwrap();
    let u = state_u(4, &p, d).unwrap();
    c.bench_function("hamiltonian_apply_D8", |b| b.iter(|| h.apply(&u)));
    c.bench_function("state_u4_D8", |b| b.iter(|| state_u(4, &p, d).unwrap()));
    let mut group = c.benchmark_group("checks_D8");
    group.sample_size(10);
    group.bench_function("commutator_hh", |b| {
        b.iter(|| fock::check_commutator_hh(0, 1, &p, d).unwrap())
    });
    group.bench_function("symmetry_r", |b| {
        b.iter(|| fock::check_r(0, 1, &[0, 1, 2, 3], &p, d).unwrap())
    });
    group.finish();
}

criterion_group!(benches, operators);
criterion_main!(benches);
