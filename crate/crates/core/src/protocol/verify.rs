//! Block production and full block verification.
//!
//! Verification recomputes the η chain from the header and coin set, checks
//! every proof against its η-extended public inputs, enforces the bucket
//! discipline, re-runs the lottery draw, and cross-checks complexities against
//! the circuit registry. Each clause fails with its own rejection reason so
//! tamper tests can assert *why* a block was refused.

use super::bucket::bucket_of;
use super::integrity::{initial_integrity, next_integrity};
use super::lottery::{lottery_draw, p_win_psi};
use super::types::{
    merkle_root, Block, BlockHeader, CoinTransaction, Difficulty, LotteryParams, ProofLink,
    ProofTransaction,
};
use crate::circuit::{generate_witness, CircuitId, CompiledCircuit, WitnessError};
use crate::field::{FieldElement, PrimeField};
use crate::hash::Hash256;
use crate::woo::{mock_prove, mock_verify, MinerAddr, MockKey, WooError};
use thiserror::Error;

/// What block verification needs to know about a registered circuit.
/// The registry produces these from its records; tests can fabricate them.
#[derive(Debug, Clone)]
pub struct CircuitInfo {
    pub complexity: u64,
    pub verifying_key: MockKey,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BlockRejection {
    #[error("header's previous-block hash does not match the chain tip")]
    PrevHashMismatch,
    #[error("proof chain must be nonempty")]
    EmptyProofChain,
    #[error("coin merkle root does not match the coin transaction set")]
    CoinRootMismatch,
    #[error("block hash does not match header and proof chain")]
    BlockHashMismatch,
    #[error("integrity chain does not match recomputed η values")]
    IntegrityChainBroken,
    #[error("proof {0} does not verify against its public inputs")]
    ProofInvalid(usize),
    #[error("transaction {0} falls outside the block's bucket")]
    BucketViolation(Hash256),
    #[error("referenced circuit {0:?} is not registered")]
    UnknownCircuit(CircuitId),
    #[error("proof {index} complexity {claimed} disagrees with registry value {registered}")]
    ComplexityMismatch { index: usize, claimed: u64, registered: u64 },
    #[error("block hash does not beat the lottery target")]
    LotteryNotWon,
}

/// Full consensus validity check.
///
/// `k_bits` is the bucket-prefix width recorded for this block height (fixed
/// per retarget window, not read from the block itself).
pub fn verify_block<F>(
    block: &Block,
    prev_hash: &Hash256,
    kappa: &Difficulty,
    params: &LotteryParams,
    k_bits: u32,
    field: &PrimeField,
    lookup: F,
) -> Result<(), BlockRejection>
where
    F: Fn(&CircuitId) -> Option<CircuitInfo>,
{
    // (a) chain linkage
    if block.header.prev_hash != *prev_hash {
        return Err(BlockRejection::PrevHashMismatch);
    }
    if block.proof_chain.is_empty() {
        return Err(BlockRejection::EmptyProofChain);
    }
    let coin_txids: Vec<Hash256> = block.coin_txs.iter().map(|tx| tx.txid).collect();
    if block.header.coin_root != merkle_root(&coin_txids) {
        return Err(BlockRejection::CoinRootMismatch);
    }
    if block.block_hash != Block::compute_hash(&block.header, &block.proof_chain) {
        return Err(BlockRejection::BlockHashMismatch);
    }

    // (b) η chain
    let mut eta = initial_integrity(&block.header, &coin_txids);
    for link in &block.proof_chain {
        if link.eta != eta {
            return Err(BlockRejection::IntegrityChainBroken);
        }
        eta = next_integrity(&eta, &link.proof.canonical_bytes());
    }

    // (c) proofs, (f) complexities
    for (i, link) in block.proof_chain.iter().enumerate() {
        let info = lookup(&link.proof_tx.circuit_id)
            .ok_or(BlockRejection::UnknownCircuit(link.proof_tx.circuit_id))?;
        if info.complexity != link.proof_tx.complexity {
            return Err(BlockRejection::ComplexityMismatch {
                index: i,
                claimed: link.proof_tx.complexity,
                registered: info.complexity,
            });
        }
        let publics = inputs_with_eta(&link.proof_tx.public_inputs, &link.eta.to_field(field));
        if !mock_verify(&info.verifying_key, &link.proof, field, &publics) {
            return Err(BlockRejection::ProofInvalid(i));
        }
    }

    // (d) bucket discipline for proof and coin transactions alike
    for txid in block
        .proof_chain
        .iter()
        .map(|l| l.proof_tx.txid)
        .chain(coin_txids.iter().copied())
    {
        let bucket = bucket_of(&txid, k_bits).map_err(|_| BlockRejection::BucketViolation(txid))?;
        if bucket != block.header.bucket_index {
            return Err(BlockRejection::BucketViolation(txid));
        }
    }

    // (e) lottery
    let p = p_win_psi(&block.chain_complexities(), kappa, params)
        .map_err(|_| BlockRejection::EmptyProofChain)?;
    if !lottery_draw(block, &p).map_err(|_| BlockRejection::EmptyProofChain)? {
        return Err(BlockRejection::LotteryNotWon);
    }
    Ok(())
}

/// Public input vector as the circuit sees it: the client-provided values in
/// declared order, then η reduced to the field (the `integrity` parameter is
/// always the final public parameter of a registered circuit).
pub fn inputs_with_eta(client_inputs: &[FieldElement], eta: &FieldElement) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(client_inputs.len() + 1);
    out.extend_from_slice(client_inputs);
    out.push(*eta);
    out
}

/// One unit of outsourced work an honest miner carries into block production:
/// the pending proof transaction plus everything needed to actually prove it.
#[derive(Debug, Clone)]
pub struct ProofJob {
    pub tx: ProofTransaction,
    pub proving_key: MockKey,
    pub compiled: CompiledCircuit,
    pub private_inputs: Vec<FieldElement>,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ProduceError {
    #[error("cannot produce a block without proof jobs")]
    NoJobs,
    #[error("witness generation for job {index} failed: {source}")]
    Witness { index: usize, source: WitnessError },
    #[error("proving job {index} failed: {source}")]
    Prove { index: usize, source: WooError },
}

/// Honest block production: builds the header, threads the η chain through
/// each job in order, and proves every job with its η injected as the final
/// public input. The caller runs the lottery draw on the result.
#[allow(clippy::too_many_arguments)]
pub fn produce_block(
    prev_hash: Hash256,
    miner_addr: MinerAddr,
    bucket_index: u32,
    timestamp: u64,
    coin_txs: Vec<CoinTransaction>,
    jobs: &[ProofJob],
    field: &PrimeField,
) -> Result<Block, ProduceError> {
    if jobs.is_empty() {
        return Err(ProduceError::NoJobs);
    }
    let coin_txids: Vec<Hash256> = coin_txs.iter().map(|tx| tx.txid).collect();
    let header = BlockHeader {
        prev_hash,
        miner_addr,
        bucket_index,
        coin_root: merkle_root(&coin_txids),
        timestamp,
    };
    let mut eta = initial_integrity(&header, &coin_txids);
    let mut proof_chain = Vec::with_capacity(jobs.len());
    for (index, job) in jobs.iter().enumerate() {
        let publics = inputs_with_eta(&job.tx.public_inputs, &eta.to_field(field));
        let witness = generate_witness(&job.compiled, &publics, &job.private_inputs)
            .map_err(|source| ProduceError::Witness { index, source })?;
        let proof = mock_prove(&job.proving_key, &job.compiled.r1cs, &witness, &publics)
            .map_err(|source| ProduceError::Prove { index, source })?;
        proof_chain.push(ProofLink { proof_tx: job.tx.clone(), eta, proof });
        eta = next_integrity(&eta, &proof.canonical_bytes());
    }
    Ok(Block::new(header, coin_txs, proof_chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compile, parse_circuit, FACTOR_EXAMPLE};
    use crate::hash::sha256;
    use crate::woo::mock_setup;

    struct Fixture {
        field: PrimeField,
        compiled: CompiledCircuit,
        circuit_id: CircuitId,
        keys: crate::woo::MockKeys,
    }

    fn fixture() -> Fixture {
        let field = PrimeField::default();
        let circuit = parse_circuit(FACTOR_EXAMPLE).unwrap();
        let compiled = compile(&circuit, &field).unwrap();
        let keys = mock_setup(circuit.id(), &compiled.r1cs, &[[1u8; 32]]).unwrap();
        Fixture { field, compiled, circuit_id: circuit.id(), keys }
    }

    fn job(fx: &Fixture, a: u64, b: u64) -> ProofJob {
        let product = fx.field.element(a * b);
        ProofJob {
            tx: ProofTransaction::new(
                fx.circuit_id,
                vec![product],
                1,
                fx.compiled.r1cs.constraint_count() as u64,
            ),
            proving_key: fx.keys.proving_key,
            compiled: fx.compiled.clone(),
            private_inputs: vec![fx.field.element(a), fx.field.element(b)],
        }
    }

    fn lookup_for(fx: &Fixture) -> impl Fn(&CircuitId) -> Option<CircuitInfo> + '_ {
        move |id| {
            (*id == fx.circuit_id).then(|| CircuitInfo {
                complexity: fx.compiled.r1cs.constraint_count() as u64,
                verifying_key: fx.keys.verifying_key,
            })
        }
    }

    fn honest_block(fx: &Fixture) -> Block {
        let jobs = vec![job(fx, 3, 5), job(fx, 7, 11), job(fx, 2, 13)];
        produce_block(sha256(b"tip"), [9u8; 20], 0, 100, vec![], &jobs, &fx.field).unwrap()
    }

    // kappa = 1 makes p_win clamp to 1 so the draw always succeeds.
    fn always_win() -> Difficulty {
        Difficulty::new(1)
    }

    #[test]
    fn produce_then_verify_round_trip() {
        let fx = fixture();
        let block = honest_block(&fx);
        assert_eq!(
            verify_block(
                &block,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Ok(())
        );
    }

    #[test]
    fn wrong_prev_hash_rejected() {
        let fx = fixture();
        let block = honest_block(&fx);
        assert_eq!(
            verify_block(
                &block,
                &sha256(b"other-tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::PrevHashMismatch)
        );
    }

    #[test]
    fn transplanted_link_breaks_integrity_chain() {
        let fx = fixture();
        let block_a = honest_block(&fx);
        let jobs = vec![job(&fx, 17, 19), job(&fx, 3, 5)];
        let block_b =
            produce_block(sha256(b"tip"), [8u8; 20], 0, 200, vec![], &jobs, &fx.field).unwrap();
        // Splice a link proved under block B's context into block A.
        let mut chain = block_a.proof_chain.clone();
        chain[1] = block_b.proof_chain[1].clone();
        let tampered = Block::new(block_a.header.clone(), vec![], chain);
        assert_eq!(
            verify_block(
                &tampered,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::IntegrityChainBroken)
        );
    }

    #[test]
    fn recomputed_eta_after_miner_swap_invalidates_proofs() {
        let fx = fixture();
        let block = honest_block(&fx);
        // An attacker replaces the miner address and recomputes the η chain
        // honestly — but the stolen proofs commit to the old η values.
        let mut header = block.header.clone();
        header.miner_addr = [1u8; 20];
        let mut eta = initial_integrity(&header, &[]);
        let chain: Vec<ProofLink> = block
            .proof_chain
            .iter()
            .map(|link| {
                let relinked = ProofLink { eta, ..link.clone() };
                eta = next_integrity(&eta, &link.proof.canonical_bytes());
                relinked
            })
            .collect();
        let hijacked = Block::new(header, vec![], chain);
        assert_eq!(
            verify_block(
                &hijacked,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::ProofInvalid(0))
        );
    }

    #[test]
    fn tampered_public_input_rejected() {
        let fx = fixture();
        let block = honest_block(&fx);
        let mut chain = block.proof_chain.clone();
        let mut tx = chain[1].proof_tx.clone();
        tx.public_inputs[0] = tx.public_inputs[0].add(&fx.field.one()).unwrap();
        chain[1] = ProofLink { proof_tx: tx, ..chain[1].clone() };
        let tampered = Block::new(block.header.clone(), vec![], chain);
        assert_eq!(
            verify_block(
                &tampered,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::ProofInvalid(1))
        );
    }

    #[test]
    fn complexity_mismatch_rejected() {
        let fx = fixture();
        let block = honest_block(&fx);
        let claimed = block.proof_chain[0].proof_tx.complexity;
        let lying_lookup = |id: &CircuitId| {
            (*id == fx.circuit_id).then(|| CircuitInfo {
                complexity: claimed + 1,
                verifying_key: fx.keys.verifying_key,
            })
        };
        assert_eq!(
            verify_block(
                &block,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lying_lookup,
            ),
            Err(BlockRejection::ComplexityMismatch {
                index: 0,
                claimed,
                registered: claimed + 1
            })
        );
    }

    #[test]
    fn unknown_circuit_rejected() {
        let fx = fixture();
        let block = honest_block(&fx);
        assert_eq!(
            verify_block(
                &block,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                |_| None,
            ),
            Err(BlockRejection::UnknownCircuit(fx.circuit_id))
        );
    }

    #[test]
    fn bucket_violation_detected() {
        let fx = fixture();
        let block = honest_block(&fx);
        // With an 8-bit prefix the jobs' txids almost surely straddle buckets
        // and cannot all live in the block's declared bucket.
        let verdict = verify_block(
            &block,
            &sha256(b"tip"),
            &always_win(),
            &LotteryParams::zero(),
            8,
            &fx.field,
            lookup_for(&fx),
        );
        assert!(
            matches!(verdict, Err(BlockRejection::BucketViolation(_))),
            "verdict: {verdict:?}"
        );
    }

    #[test]
    fn lottery_loss_rejected() {
        let fx = fixture();
        let block = honest_block(&fx);
        // κ = 2^62 drives p below 10^-17; this particular block hash cannot
        // beat such a target.
        assert_eq!(
            verify_block(
                &block,
                &sha256(b"tip"),
                &Difficulty::new(1 << 62),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::LotteryNotWon)
        );
    }

    #[test]
    fn coin_root_and_block_hash_are_checked() {
        let fx = fixture();
        let block = honest_block(&fx);
        let mut bad_root = block.clone();
        bad_root.header.coin_root = sha256(b"junk");
        bad_root.block_hash = Block::compute_hash(&bad_root.header, &bad_root.proof_chain);
        assert_eq!(
            verify_block(
                &bad_root,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::CoinRootMismatch)
        );
        let mut bad_hash = block;
        bad_hash.block_hash = sha256(b"forged");
        assert_eq!(
            verify_block(
                &bad_hash,
                &sha256(b"tip"),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            ),
            Err(BlockRejection::BlockHashMismatch)
        );
    }

    #[test]
    fn produce_requires_jobs() {
        let fx = fixture();
        assert_eq!(
            produce_block(sha256(b"tip"), [0u8; 20], 0, 1, vec![], &[], &fx.field),
            Err(ProduceError::NoJobs)
        );
    }

    #[test]
    fn produce_rejects_unsatisfiable_job() {
        let fx = fixture();
        let mut bad = job(&fx, 3, 5);
        bad.tx = ProofTransaction::new(
            fx.circuit_id,
            vec![fx.field.element(16)], // 3 * 5 != 16
            1,
            bad.tx.complexity,
        );
        let err = produce_block(sha256(b"tip"), [0u8; 20], 0, 1, vec![], &[bad], &fx.field)
            .unwrap_err();
        assert!(matches!(err, ProduceError::Witness { index: 0, .. }));
    }

    #[test]
    fn freshness_across_randomized_contexts() {
        // A link valid in its own block always fails η or proof checks when
        // replayed under any other (prev_hash, miner, timestamp) context.
        let fx = fixture();
        for i in 0u8..20 {
            let jobs = vec![job(&fx, 3, 5)];
            let a = produce_block(sha256(&[i]), [i; 20], 0, i as u64, vec![], &jobs, &fx.field)
                .unwrap();
            let b = produce_block(
                sha256(&[i, 1]),
                [i.wrapping_add(1); 20],
                0,
                i as u64 + 1,
                vec![],
                &jobs,
                &fx.field,
            )
            .unwrap();
            let spliced = Block::new(b.header.clone(), vec![], a.proof_chain.clone());
            let verdict = verify_block(
                &spliced,
                &sha256(&[i, 1]),
                &always_win(),
                &LotteryParams::zero(),
                0,
                &fx.field,
                lookup_for(&fx),
            );
            assert!(
                matches!(
                    verdict,
                    Err(BlockRejection::IntegrityChainBroken) | Err(BlockRejection::ProofInvalid(_))
                ),
                "context {i}: {verdict:?}"
            );
        }
    }
}
