//! Witness-obfuscating outsourcing: additive masking of private inputs, the
//! transformed circuit with embedded unmasking and output masking, a mock
//! proof system, and metadata-binding outer wrapping.
//!
//! Masking is information-theoretic: for uniform r, s + r reveals nothing
//! about s. The transformed circuit hard-codes the masks as constants so a
//! worker holding it can prove over the masked witness without ever seeing
//! the raw inputs.
//!
//! The proof system is a **non-sound mock**: a `MockProof` is a commitment
//! binding (circuit id, public inputs, witness) with the 160-byte on-wire
//! size of a real constant-size proof. It demonstrates binding, freshness,
//! linear proving cost, and constant verification cost, but a dishonest
//! prover can fabricate one. Do not use outside simulation.

use crate::circuit::{
    compile, generate_witness, Circuit, CircuitId, CompiledCircuit, Expr, Param, ParamType, Stmt,
    Visibility, Witness, R1CS,
};
use crate::field::{FieldElement, PrimeField};
use crate::hash::{sha256, CanonicalWriter, Hash256};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

pub const MOCK_PROOF_SIZE: usize = 160;
pub const MINER_ADDR_LEN: usize = 20;

pub type MinerAddr = [u8; MINER_ADDR_LEN];

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum WooError {
    #[error("mask vector length does not match circuit ({expected} expected, {got} given)")]
    LengthMismatch { expected: usize, got: usize },
    #[error("circuit already declares reserved name `{0}`")]
    NameCollision(String),
    #[error("trusted setup needs at least one contribution")]
    NoContributions,
    #[error("proving key does not match this constraint system")]
    KeyMismatch,
    #[error("witness does not satisfy the constraint system")]
    UnsatisfiedWitness,
    #[error("transformed circuit was not derived from this base circuit")]
    Mismatch,
    #[error("compilation of transformed circuit failed")]
    TransformCompileFailed,
}

/// Per-input and per-output masks, sampled uniformly from the field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskVector {
    pub r_in: Vec<FieldElement>,
    pub r_out: Vec<FieldElement>,
}

/// Deterministic seed expansion into uniform field elements: rejection
/// sampling over 8-byte chunks of a SHA-256 counter stream. Callers wanting
/// unpredictable masks pass fresh entropy as the seed.
pub fn sample_masks(circuit: &Circuit, seed: Hash256, field: &PrimeField) -> MaskVector {
    let n_in = circuit.n_private();
    let n_out = circuit.output_locals().len();
    let mut sampler = FieldSampler::new(seed);
    let r_in = (0..n_in).map(|_| sampler.next(field)).collect();
    let r_out = (0..n_out).map(|_| sampler.next(field)).collect();
    MaskVector { r_in, r_out }
}

struct FieldSampler {
    seed: Hash256,
    counter: u64,
    pool: Vec<u64>,
}

impl FieldSampler {
    fn new(seed: Hash256) -> Self {
        FieldSampler { seed, counter: 0, pool: Vec::new() }
    }

    fn next(&mut self, field: &PrimeField) -> FieldElement {
        let p = field.modulus();
        // Largest multiple of p below 2^64; chunks at or above it are biased
        // and get rejected.
        let limit = u64::MAX - (u64::MAX % p);
        loop {
            if let Some(chunk) = self.pool.pop() {
                if chunk < limit {
                    return field.element(chunk % p);
                }
                continue;
            }
            let mut w = CanonicalWriter::new();
            w.hash(&self.seed).u64(self.counter);
            self.counter += 1;
            let digest = w.digest();
            for i in (0..4).rev() {
                let bytes: [u8; 8] = digest.0[i * 8..(i + 1) * 8].try_into().unwrap();
                self.pool.push(u64::from_be_bytes(bytes));
            }
        }
    }
}

/// ŝ = s + r elementwise.
pub fn mask_inputs(
    private_inputs: &[FieldElement],
    masks: &MaskVector,
) -> Result<Vec<FieldElement>, WooError> {
    if private_inputs.len() != masks.r_in.len() {
        return Err(WooError::LengthMismatch {
            expected: masks.r_in.len(),
            got: private_inputs.len(),
        });
    }
    Ok(private_inputs
        .iter()
        .zip(&masks.r_in)
        .map(|(s, r)| s.add(r).expect("same field"))
        .collect())
}

/// s = ŝ - r; inverse of masking for both inputs and outputs.
pub fn unmask(value: FieldElement, r: FieldElement) -> Result<FieldElement, crate::field::FieldError> {
    value.sub(&r)
}

/// The transformed circuit F̂: private inputs arrive masked and are unmasked
/// in-circuit against hard-coded constants, declared outputs gain masked
/// public twins, and a public `integrity` parameter with a nonzero gadget is
/// appended. Constraint count exceeds the base circuit's by exactly
/// |r_in| + |r_out| + 1.
#[derive(Debug, Clone)]
pub struct TransformedCircuit {
    pub base: Circuit,
    pub circuit: Circuit,
    pub masks: MaskVector,
    pub compiled: CompiledCircuit,
}

pub const MASKED_INPUT_PREFIX: &str = "__woo_in_";
pub const MASKED_OUTPUT_PREFIX: &str = "__woo_out_";
pub const INTEGRITY_PARAM: &str = "integrity";

pub fn transform_circuit(
    circuit: &Circuit,
    masks: &MaskVector,
    field: &PrimeField,
) -> Result<TransformedCircuit, WooError> {
    for p in &circuit.params {
        if p.name == INTEGRITY_PARAM || p.name.starts_with("__woo_") {
            return Err(WooError::NameCollision(p.name.clone()));
        }
    }
    for s in &circuit.statements {
        if let Stmt::Local { name, .. } = s {
            if name == INTEGRITY_PARAM || name.starts_with("__woo_") {
                return Err(WooError::NameCollision(name.clone()));
            }
        }
    }
    if masks.r_in.len() != circuit.n_private() {
        return Err(WooError::LengthMismatch {
            expected: circuit.n_private(),
            got: masks.r_in.len(),
        });
    }
    let outputs: Vec<String> =
        circuit.output_locals().into_iter().map(|s| s.to_string()).collect();
    if masks.r_out.len() != outputs.len() {
        return Err(WooError::LengthMismatch { expected: outputs.len(), got: masks.r_out.len() });
    }

    let mut params = Vec::new();
    for p in &circuit.params {
        match p.visibility {
            Visibility::Public => params.push(p.clone()),
            Visibility::Private => params.push(Param {
                visibility: Visibility::Private,
                ty: p.ty,
                name: format!("{MASKED_INPUT_PREFIX}{}", p.name),
            }),
        }
    }
    for out in &outputs {
        params.push(Param {
            visibility: Visibility::Public,
            ty: ParamType::Field,
            name: format!("{MASKED_OUTPUT_PREFIX}{out}"),
        });
    }
    params.push(Param {
        visibility: Visibility::Public,
        ty: ParamType::Field,
        name: INTEGRITY_PARAM.into(),
    });

    let mut statements = Vec::new();
    // in-circuit unmasking: s = ŝ - r, with r hard-coded
    for (p, r) in circuit.private_params().zip(&masks.r_in) {
        statements.push(Stmt::Local {
            name: p.name.clone(),
            expr: Expr::Sub(
                Box::new(Expr::Ident(format!("{MASKED_INPUT_PREFIX}{}", p.name))),
                Box::new(Expr::Literal(r.value())),
            ),
        });
    }
    statements.extend(circuit.statements.iter().cloned());
    // output masking: ŝ_out = s_out + r_out, exposed as a public twin
    for (out, r) in outputs.iter().zip(&masks.r_out) {
        statements.push(Stmt::Assert {
            op: crate::circuit::CompareOp::Eq,
            lhs: Expr::Ident(format!("{MASKED_OUTPUT_PREFIX}{out}")),
            rhs: Expr::Add(Box::new(Expr::Ident(out.clone())), Box::new(Expr::Literal(r.value()))),
        });
    }
    statements.push(Stmt::Assert {
        op: crate::circuit::CompareOp::Neq,
        lhs: Expr::Ident(INTEGRITY_PARAM.into()),
        rhs: Expr::Literal(0),
    });

    let mut transformed = Circuit {
        name: circuit.name.clone(),
        params,
        statements,
        canonical_source: String::new(),
    };
    transformed.canonical_source = crate::circuit::canonicalize_source(&transformed.to_source());
    let compiled =
        compile(&transformed, field).map_err(|_| WooError::TransformCompileFailed)?;
    Ok(TransformedCircuit {
        base: circuit.clone(),
        circuit: transformed,
        masks: masks.clone(),
        compiled,
    })
}

impl TransformedCircuit {
    /// Assembles the transformed circuit's public input vector from the base
    /// public inputs, the base witness (for output values), and η.
    pub fn public_inputs(
        &self,
        base_public: &[FieldElement],
        base_witness: &Witness,
        base_compiled: &CompiledCircuit,
        eta: FieldElement,
    ) -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> = base_public.to_vec();
        for (name, r) in self.base.output_locals().iter().zip(&self.masks.r_out) {
            let var = base_compiled
                .local_vars
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .expect("output local exists");
            out.push(base_witness.values[var].add(r).expect("same field"));
        }
        out.push(eta);
        out
    }
}

/// Key halves of the mock proof system. Both sides carry the same derivation
/// material; the split mirrors a real SNARK's pk/vk interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockKey {
    pub circuit_id: CircuitId,
    pub r1cs_digest: Hash256,
    pub setup_seed: Hash256,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockKeys {
    pub proving_key: MockKey,
    pub verifying_key: MockKey,
}

/// Simulated SMPC ceremony: the setup seed hashes the concatenation of all
/// contributions, so changing any single one changes the keys.
pub fn mock_setup(
    circuit_id: CircuitId,
    r1cs: &R1CS,
    contributions: &[[u8; 32]],
) -> Result<MockKeys, WooError> {
    if contributions.is_empty() {
        return Err(WooError::NoContributions);
    }
    let mut concat = Vec::with_capacity(contributions.len() * 32);
    for c in contributions {
        concat.extend_from_slice(c);
    }
    let setup_seed = sha256(&concat);
    let key = MockKey { circuit_id, r1cs_digest: r1cs.digest(), setup_seed };
    Ok(MockKeys { proving_key: key, verifying_key: key })
}

/// Mock proof: binds circuit id, public inputs (η included), and the witness.
/// Fixed 160-byte serialized size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockProof {
    pub circuit_id: CircuitId,
    pub public_input_digest: Hash256,
    pub witness_commitment: Hash256,
}

pub fn public_input_digest(field: &PrimeField, public_inputs: &[FieldElement]) -> Hash256 {
    let mut w = CanonicalWriter::new();
    w.u64(field.modulus());
    w.u64(public_inputs.len() as u64);
    for v in public_inputs {
        w.u64(v.value());
    }
    w.digest()
}

impl MockProof {
    pub fn canonical_bytes(&self) -> [u8; MOCK_PROOF_SIZE] {
        let mut out = [0u8; MOCK_PROOF_SIZE];
        out[0..32].copy_from_slice(&self.circuit_id.0 .0);
        out[32..64].copy_from_slice(&self.public_input_digest.0);
        out[64..96].copy_from_slice(&self.witness_commitment.0);
        out
    }

    pub fn from_canonical_bytes(bytes: &[u8]) -> Option<MockProof> {
        if bytes.len() != MOCK_PROOF_SIZE || bytes[96..].iter().any(|&b| b != 0) {
            return None;
        }
        Some(MockProof {
            circuit_id: CircuitId(Hash256(bytes[0..32].try_into().unwrap())),
            public_input_digest: Hash256(bytes[32..64].try_into().unwrap()),
            witness_commitment: Hash256(bytes[64..96].try_into().unwrap()),
        })
    }

    pub fn digest(&self) -> Hash256 {
        sha256(&self.canonical_bytes())
    }
}

/// Runs the full satisfaction check (the linear-cost useful work) and emits a
/// proof binding the circuit, public inputs, and witness.
pub fn mock_prove(
    pk: &MockKey,
    r1cs: &R1CS,
    witness: &Witness,
    public_inputs: &[FieldElement],
) -> Result<MockProof, WooError> {
    if pk.r1cs_digest != r1cs.digest() {
        return Err(WooError::KeyMismatch);
    }
    if public_inputs.len() != r1cs.n_public
        || witness.values.get(1..=r1cs.n_public).map(|s| s != public_inputs).unwrap_or(true)
    {
        return Err(WooError::UnsatisfiedWitness);
    }
    if !r1cs.check_satisfaction(witness).map_err(|_| WooError::UnsatisfiedWitness)? {
        return Err(WooError::UnsatisfiedWitness);
    }
    let mut w = CanonicalWriter::new();
    w.hash(&pk.setup_seed).bytes(&witness.canonical_bytes());
    Ok(MockProof {
        circuit_id: pk.circuit_id,
        public_input_digest: public_input_digest(&r1cs.field, public_inputs),
        witness_commitment: w.digest(),
    })
}

/// Constant-time in constraint count: only recomputes the public input
/// digest. No soundness; see module docs.
pub fn mock_verify(
    vk: &MockKey,
    proof: &MockProof,
    field: &PrimeField,
    public_inputs: &[FieldElement],
) -> bool {
    vk.circuit_id == proof.circuit_id
        && proof.public_input_digest == public_input_digest(field, public_inputs)
}

/// On-chain form of a proof: the inner proof stays private, only its digest
/// plus the block-context commitment is published.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterProof {
    pub inner_digest: Hash256,
    pub prev_block_hash: Hash256,
    pub miner_addr: MinerAddr,
    pub outer_commitment: Hash256,
}

fn outer_commitment(inner_digest: &Hash256, prev: &Hash256, miner: &MinerAddr) -> Hash256 {
    let mut w = CanonicalWriter::new();
    w.hash(inner_digest).hash(prev).bytes(miner);
    w.digest()
}

pub fn wrap_outer(inner: &MockProof, prev_block_hash: Hash256, miner_addr: MinerAddr) -> OuterProof {
    let inner_digest = inner.digest();
    OuterProof {
        inner_digest,
        prev_block_hash,
        miner_addr,
        outer_commitment: outer_commitment(&inner_digest, &prev_block_hash, &miner_addr),
    }
}

pub fn verify_outer(outer: &OuterProof, expected_prev: &Hash256, expected_miner: &MinerAddr) -> bool {
    outer.prev_block_hash == *expected_prev
        && outer.miner_addr == *expected_miner
        && outer.outer_commitment
            == outer_commitment(&outer.inner_digest, &outer.prev_block_hash, &outer.miner_addr)
}

impl OuterProof {
    /// inner_digest(32) || prev_block_hash(32) || miner_addr(20) || commitment(32)
    pub fn canonical_bytes(&self) -> [u8; 116] {
        let mut out = [0u8; 116];
        out[0..32].copy_from_slice(&self.inner_digest.0);
        out[32..64].copy_from_slice(&self.prev_block_hash.0);
        out[64..84].copy_from_slice(&self.miner_addr);
        out[84..116].copy_from_slice(&self.outer_commitment.0);
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OverheadReport {
    pub base_constraints: usize,
    pub transformed_constraints: usize,
    pub delta_constraints: usize,
    pub base_prove_time: Duration,
    pub transformed_prove_time: Duration,
}

/// Measures constraint and prove-time overhead of the transformation over
/// matched inputs. `reps` proofs are run per side and the median taken.
pub fn woo_overhead(
    base_compiled: &CompiledCircuit,
    transformed: &TransformedCircuit,
    base_public: &[FieldElement],
    base_private: &[FieldElement],
    eta: FieldElement,
    reps: usize,
) -> Result<OverheadReport, WooError> {
    if transformed.compiled.private_names.len() != base_compiled.private_names.len() {
        return Err(WooError::Mismatch);
    }
    let base_n = base_compiled.r1cs.constraint_count();
    let t_n = transformed.compiled.r1cs.constraint_count();
    let expected_delta = transformed.masks.r_in.len() + transformed.masks.r_out.len() + 1;
    if t_n != base_n + expected_delta {
        return Err(WooError::Mismatch);
    }

    let base_witness = generate_witness(base_compiled, base_public, base_private)
        .map_err(|_| WooError::UnsatisfiedWitness)?;
    let masked = mask_inputs(base_private, &transformed.masks)?;
    let t_public = transformed.public_inputs(base_public, &base_witness, base_compiled, eta);
    let t_witness = generate_witness(&transformed.compiled, &t_public, &masked)
        .map_err(|_| WooError::UnsatisfiedWitness)?;

    let base_keys = mock_setup(CircuitId(Hash256::ZERO), &base_compiled.r1cs, &[[1u8; 32]])?;
    let t_keys = mock_setup(transformed.circuit.id(), &transformed.compiled.r1cs, &[[1u8; 32]])?;

    let time_proves = |pk: &MockKey, r1cs: &R1CS, w: &Witness, pi: &[FieldElement]| {
        let mut samples = Vec::with_capacity(reps);
        for _ in 0..reps.max(1) {
            let start = Instant::now();
            let proof = mock_prove(pk, r1cs, w, pi).expect("witness satisfies");
            samples.push(start.elapsed());
            std::hint::black_box(proof);
        }
        samples.sort();
        samples[samples.len() / 2]
    };
    let base_time =
        time_proves(&base_keys.proving_key, &base_compiled.r1cs, &base_witness, base_public);
    let t_time =
        time_proves(&t_keys.proving_key, &transformed.compiled.r1cs, &t_witness, &t_public);

    Ok(OverheadReport {
        base_constraints: base_n,
        transformed_constraints: t_n,
        delta_constraints: t_n - base_n,
        base_prove_time: base_time,
        transformed_prove_time: t_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    /// Factor circuit without integrity: the transform adds it.
    pub const FACTOR_PLAIN: &str = r#"def main(
    private field factor1,
    private field factor2,
    public field product
) -> bool {
    assert(factor1 * factor2 == product);
    return true;
}
"#;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn seed(b: u8) -> Hash256 {
        Hash256([b; 32])
    }

    #[test]
    fn mask_sampling_is_deterministic_and_seed_sensitive() {
        let c = parse_circuit(FACTOR_PLAIN).unwrap();
        let f = field();
        let a = sample_masks(&c, seed(1), &f);
        let b = sample_masks(&c, seed(1), &f);
        assert_eq!(a, b);
        assert_eq!(a.r_in.len(), 2);
        assert_eq!(a.r_out.len(), 0);
        let mut flipped = seed(1);
        flipped.0[31] ^= 1;
        let c2 = sample_masks(&c, flipped, &f);
        assert_ne!(a, c2);
    }

    #[test]
    fn zero_private_inputs_give_empty_mask() {
        let c = parse_circuit("def main(public field x) -> bool { assert(x == x); return true; }")
            .unwrap();
        let m = sample_masks(&c, seed(3), &field());
        assert!(m.r_in.is_empty());
    }

    #[test]
    fn masking_wraps_and_round_trips() {
        let f = crate::field::PrimeField::new_unchecked_size(11).unwrap();
        let masks = MaskVector { r_in: vec![f.element(3), f.element(5)], r_out: vec![] };
        let masked = mask_inputs(&[f.element(5), f.element(9)], &masks).unwrap();
        assert_eq!(masked, vec![f.element(8), f.element(3)]);
        assert_eq!(unmask(masked[0], masks.r_in[0]).unwrap(), f.element(5));
        assert_eq!(unmask(f.element(3), f.element(5)).unwrap(), f.element(9));
    }

    #[test]
    fn masking_round_trip_many() {
        let f = field();
        let mut sampler = FieldSampler::new(seed(7));
        for _ in 0..10_000 {
            let s = sampler.next(&f);
            let r = sampler.next(&f);
            assert_eq!(unmask(s.add(&r).unwrap(), r).unwrap(), s);
        }
    }

    #[test]
    fn masking_is_uniform_small_field() {
        // chi-square over p = 251 with 10^5 samples of s + r, fixed s
        let f = crate::field::PrimeField::new_unchecked_size(251).unwrap();
        let s = f.element(42);
        let mut sampler = FieldSampler::new(seed(9));
        let mut counts = vec![0u64; 251];
        let n = 100_000;
        for _ in 0..n {
            let r = sampler.next(&f);
            counts[s.add(&r).unwrap().value() as usize] += 1;
        }
        let expected = n as f64 / 251.0;
        let chi2: f64 =
            counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // df = 250, p = 0.01 critical value
        assert!(chi2 < 304.94, "chi2 = {chi2}");
    }

    #[test]
    fn transform_constraint_delta() {
        let f = field();
        let c = parse_circuit(FACTOR_PLAIN).unwrap();
        let base = compile(&c, &f).unwrap();
        let masks = sample_masks(&c, seed(1), &f);
        let t = transform_circuit(&c, &masks, &f).unwrap();
        // 2 unmask + 0 outputs + 1 integrity
        assert_eq!(
            t.compiled.r1cs.constraint_count(),
            base.r1cs.constraint_count() + 3
        );
    }

    #[test]
    fn transform_without_private_inputs_adds_only_integrity() {
        let f = field();
        let c = parse_circuit("def main(public field x) -> bool { assert(x == x); return true; }")
            .unwrap();
        let base = compile(&c, &f).unwrap();
        let masks = sample_masks(&c, seed(1), &f);
        let t = transform_circuit(&c, &masks, &f).unwrap();
        assert_eq!(t.compiled.r1cs.constraint_count(), base.r1cs.constraint_count() + 1);
    }

    #[test]
    fn transform_rejects_reserved_names() {
        let f = field();
        let c = parse_circuit(
            "def main(public field integrity) -> bool { assert(integrity != 0); return true; }",
        )
        .unwrap();
        let masks = sample_masks(&c, seed(1), &f);
        assert!(matches!(
            transform_circuit(&c, &masks, &f),
            Err(WooError::NameCollision(_))
        ));
    }

    #[test]
    fn satisfiability_equivalence_under_masking() {
        let f = field();
        let c = parse_circuit(FACTOR_PLAIN).unwrap();
        let base = compile(&c, &f).unwrap();
        let masks = sample_masks(&c, seed(2), &f);
        let t = transform_circuit(&c, &masks, &f).unwrap();
        let mut sampler = FieldSampler::new(seed(4));
        let eta = f.element(7);
        for i in 0..100 {
            let s1 = sampler.next(&f);
            let s2 = sampler.next(&f);
            // even cases satisfiable, odd cases (almost surely) not
            let product = if i % 2 == 0 {
                s1.mul(&s2).unwrap()
            } else {
                s1.mul(&s2).unwrap().add(&f.one()).unwrap()
            };
            let base_result = generate_witness(&base, &[product], &[s1, s2]);
            let masked = mask_inputs(&[s1, s2], &masks).unwrap();
            match base_result {
                Ok(base_w) => {
                    let t_pub = t.public_inputs(&[product], &base_w, &base, eta);
                    let t_w = generate_witness(&t.compiled, &t_pub, &masked).unwrap();
                    assert_eq!(t.compiled.r1cs.check_satisfaction(&t_w), Ok(true));
                }
                Err(_) => {
                    let t_pub = vec![product, eta];
                    assert!(generate_witness(&t.compiled, &t_pub, &masked).is_err());
                }
            }
        }
    }

    #[test]
    fn output_masking_exposes_masked_twin() {
        let f = field();
        let src = r#"def main(private field x, public field y) -> bool {
            field out_sq = x * x;
            assert(out_sq + y == out_sq + y);
            return true;
        }"#;
        let c = parse_circuit(src).unwrap();
        let base = compile(&c, &f).unwrap();
        let masks = sample_masks(&c, seed(5), &f);
        assert_eq!(masks.r_out.len(), 1);
        let t = transform_circuit(&c, &masks, &f).unwrap();
        assert_eq!(
            t.compiled.r1cs.constraint_count(),
            base.r1cs.constraint_count() + 3
        );
        let x = f.element(6);
        let base_w = generate_witness(&base, &[f.element(1)], &[x]).unwrap();
        let eta = f.element(9);
        let t_pub = t.public_inputs(&[f.element(1)], &base_w, &base, eta);
        let masked_out = t_pub[1];
        assert_eq!(unmask(masked_out, masks.r_out[0]).unwrap(), f.element(36));
        let masked_in = mask_inputs(&[x], &masks).unwrap();
        let t_w = generate_witness(&t.compiled, &t_pub, &masked_in).unwrap();
        assert_eq!(t.compiled.r1cs.check_satisfaction(&t_w), Ok(true));
    }

    #[test]
    fn setup_seed_fixed_vector_and_sensitivity() {
        let f = field();
        let (r1cs, _) = crate::circuit::synthetic_chain(3, &f, 2);
        let id = CircuitId(Hash256::ZERO);
        let keys = mock_setup(id, &r1cs, &[[0u8; 32]]).unwrap();
        assert_eq!(keys.proving_key.setup_seed, sha256(&[0u8; 32]));
        assert_eq!(keys.proving_key, keys.verifying_key);

        let a = mock_setup(id, &r1cs, &[[1u8; 32], [2u8; 32]]).unwrap();
        let b = mock_setup(id, &r1cs, &[[2u8; 32], [1u8; 32]]).unwrap();
        assert_ne!(a.proving_key.setup_seed, b.proving_key.setup_seed);

        let mut contributions = [[7u8; 32]; 5];
        let before = mock_setup(id, &r1cs, &contributions).unwrap();
        contributions[3][0] ^= 1;
        let after = mock_setup(id, &r1cs, &contributions).unwrap();
        assert_ne!(before.proving_key.setup_seed, after.proving_key.setup_seed);

        assert_eq!(mock_setup(id, &r1cs, &[]), Err(WooError::NoContributions));
    }

    #[test]
    fn prove_verify_round_trip_and_binding() {
        let f = field();
        let c = parse_circuit(crate::circuit::FACTOR_EXAMPLE).unwrap();
        let compiled = compile(&c, &f).unwrap();
        let keys = mock_setup(c.id(), &compiled.r1cs, &[[9u8; 32]]).unwrap();
        let publics = [f.element(15), f.element(7)];
        let w = generate_witness(&compiled, &publics, &[f.element(3), f.element(5)]).unwrap();
        let proof = mock_prove(&keys.proving_key, &compiled.r1cs, &w, &publics).unwrap();
        assert!(mock_verify(&keys.verifying_key, &proof, &f, &publics));
        // η altered after proving
        assert!(!mock_verify(&keys.verifying_key, &proof, &f, &[f.element(15), f.element(8)]));
        // every single-field tamper is caught
        for i in 0..publics.len() {
            let mut tampered = publics;
            tampered[i] = tampered[i].add(&f.one()).unwrap();
            assert!(!mock_verify(&keys.verifying_key, &proof, &f, &tampered));
        }
    }

    #[test]
    fn prove_rejects_bad_witness_and_wrong_key() {
        let f = field();
        let c = parse_circuit(crate::circuit::FACTOR_EXAMPLE).unwrap();
        let compiled = compile(&c, &f).unwrap();
        let keys = mock_setup(c.id(), &compiled.r1cs, &[[9u8; 32]]).unwrap();
        let publics = [f.element(15), f.element(7)];
        let mut w = generate_witness(&compiled, &publics, &[f.element(3), f.element(5)]).unwrap();
        w.values[3] = f.element(4);
        assert_eq!(
            mock_prove(&keys.proving_key, &compiled.r1cs, &w, &publics),
            Err(WooError::UnsatisfiedWitness)
        );
        let (other, _) = crate::circuit::synthetic_chain(2, &f, 2);
        let w2 = generate_witness(&compiled, &publics, &[f.element(3), f.element(5)]).unwrap();
        assert_eq!(
            mock_prove(&keys.proving_key, &other, &w2, &publics),
            Err(WooError::KeyMismatch)
        );
    }

    #[test]
    fn proof_serialization_is_160_bytes() {
        let proof = MockProof {
            circuit_id: CircuitId(sha256(b"a")),
            public_input_digest: sha256(b"b"),
            witness_commitment: sha256(b"c"),
        };
        let bytes = proof.canonical_bytes();
        assert_eq!(bytes.len(), MOCK_PROOF_SIZE);
        assert_eq!(MockProof::from_canonical_bytes(&bytes), Some(proof));
        let mut bad = bytes;
        bad[159] = 1;
        assert_eq!(MockProof::from_canonical_bytes(&bad), None);
    }

    #[test]
    fn outer_proof_binds_metadata() {
        let inner = MockProof {
            circuit_id: CircuitId(sha256(b"a")),
            public_input_digest: sha256(b"b"),
            witness_commitment: sha256(b"c"),
        };
        let prev = sha256(b"prev");
        let miner: MinerAddr = [5u8; 20];
        let outer = wrap_outer(&inner, prev, miner);
        assert!(verify_outer(&outer, &prev, &miner));
        assert!(!verify_outer(&outer, &prev, &[6u8; 20]));
        assert!(!verify_outer(&outer, &sha256(b"other"), &miner));
        // all-zero metadata edge case
        let outer0 = wrap_outer(&inner, Hash256::ZERO, [0u8; 20]);
        assert!(verify_outer(&outer0, &Hash256::ZERO, &[0u8; 20]));
        // distinct inner proofs, same metadata -> distinct commitments
        let inner2 = MockProof { witness_commitment: sha256(b"d"), ..inner };
        let outer2 = wrap_outer(&inner2, prev, miner);
        assert_ne!(outer.outer_commitment, outer2.outer_commitment);
        assert_eq!(outer.canonical_bytes().len(), 116);
    }

    #[test]
    fn overhead_report_constraint_delta() {
        let f = field();
        let src = crate::circuit::synthetic_circuit_source(50);
        let c = parse_circuit(&src).unwrap();
        let base = compile(&c, &f).unwrap();
        let masks = sample_masks(&c, seed(8), &f);
        let t = transform_circuit(&c, &masks, &f).unwrap();
        let s1 = f.element(3);
        let s2 = f.element(5);
        let expected = crate::circuit::synthetic_circuit_expected(50, s1, s2);
        let report = woo_overhead(&base, &t, &[expected], &[s1, s2], f.element(7), 3).unwrap();
        // 2 masked inputs + 1 masked output + 1 integrity
        assert_eq!(report.delta_constraints, 4);
    }
}
