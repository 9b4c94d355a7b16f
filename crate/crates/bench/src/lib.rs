//! Shared fixtures for the criterion benchmarks.

use pouw_core::circuit::{
    compile, generate_witness, parse_circuit, synthetic_circuit_expected,
    synthetic_circuit_source, CompiledCircuit, Witness,
};
use pouw_core::woo::{mask_inputs, mock_setup, sample_masks, transform_circuit, MockKeys};
use pouw_core::{FieldElement, PrimeField};

/// A compiled squaring chain plus a satisfying witness and mock keys.
pub struct ProverFixture {
    pub field: PrimeField,
    pub compiled: CompiledCircuit,
    pub witness: Witness,
    pub public_inputs: Vec<FieldElement>,
    pub keys: MockKeys,
}

pub fn prover_fixture(n_stmts: usize) -> ProverFixture {
    let field = PrimeField::default();
    let circuit = parse_circuit(&synthetic_circuit_source(n_stmts)).unwrap();
    let compiled = compile(&circuit, &field).unwrap();
    let s1 = field.element(12345);
    let s2 = field.element(67890);
    let expected = synthetic_circuit_expected(n_stmts, s1, s2);
    let public_inputs = vec![expected];
    let witness = generate_witness(&compiled, &public_inputs, &[s1, s2]).unwrap();
    let keys = mock_setup(circuit.id(), &compiled.r1cs, &[[1u8; 32]]).unwrap();
    ProverFixture { field, compiled, witness, public_inputs, keys }
}

/// Base and transformed fixtures over the same inputs, for overhead benches.
pub struct WooFixture {
    pub base: ProverFixture,
    pub transformed_compiled: CompiledCircuit,
    pub transformed_witness: Witness,
    pub transformed_publics: Vec<FieldElement>,
    pub transformed_keys: MockKeys,
}

pub fn woo_fixture(n_stmts: usize) -> WooFixture {
    let field = PrimeField::default();
    let circuit = parse_circuit(&synthetic_circuit_source(n_stmts)).unwrap();
    let compiled = compile(&circuit, &field).unwrap();
    let s1 = field.element(12345);
    let s2 = field.element(67890);
    let expected = synthetic_circuit_expected(n_stmts, s1, s2);
    let base_public = vec![expected];
    let base_private = vec![s1, s2];
    let base_witness = generate_witness(&compiled, &base_public, &base_private).unwrap();

    let masks = sample_masks(&circuit, pouw_core::hash::sha256(b"bench"), &field);
    let t = transform_circuit(&circuit, &masks, &field).unwrap();
    let masked = mask_inputs(&base_private, &masks).unwrap();
    let publics = t.public_inputs(&base_public, &base_witness, &compiled, field.element(7));
    let transformed_witness = generate_witness(&t.compiled, &publics, &masked).unwrap();
    let transformed_keys = mock_setup(t.circuit.id(), &t.compiled.r1cs, &[[1u8; 32]]).unwrap();
    let base_keys = mock_setup(circuit.id(), &compiled.r1cs, &[[1u8; 32]]).unwrap();

    WooFixture {
        base: ProverFixture {
            field,
            compiled,
            witness: base_witness,
            public_inputs: base_public,
            keys: base_keys,
        },
        transformed_compiled: t.compiled,
        transformed_witness,
        transformed_publics: publics,
        transformed_keys,
    }
}
