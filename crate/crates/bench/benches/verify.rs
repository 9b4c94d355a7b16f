//! Prover/verifier asymmetry: proving costs O(n) in constraints while
//! verification only recomputes a constant-size public-input digest.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pouw_bench::prover_fixture;
use pouw_core::woo::{mock_prove, mock_verify};

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("mock_verify");
    for n_stmts in [500usize, 5_000, 50_000] {
        let fx = prover_fixture(n_stmts);
        let n = fx.compiled.r1cs.constraint_count();
        let proof =
            mock_prove(&fx.keys.proving_key, &fx.compiled.r1cs, &fx.witness, &fx.public_inputs)
                .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &fx, |b, fx| {
            b.iter(|| {
                assert!(mock_verify(&fx.keys.verifying_key, &proof, &fx.field, &fx.public_inputs))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_verify);
criterion_main!(benches);
