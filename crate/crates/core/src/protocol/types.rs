//! Chain data model: transactions, blocks, the integrity parameter, and
//! consensus tuning state.

use crate::circuit::CircuitId;
use crate::field::{FieldElement, PrimeField};
use crate::hash::{sha256, CanonicalWriter, Hash256};
use crate::woo::{MinerAddr, MockProof};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Native-currency transaction with a fixed network-wide fee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinTransaction {
    pub txid: Hash256,
    pub payload: Vec<u8>,
    pub fee: u64,
}

impl CoinTransaction {
    pub fn new(payload: Vec<u8>, fee: u64) -> Self {
        let mut w = CanonicalWriter::new();
        w.bytes(&payload).u64(fee);
        CoinTransaction { txid: w.digest(), payload, fee }
    }
}

/// Request for proof generation; fee scales with circuit complexity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTransaction {
    pub txid: Hash256,
    pub circuit_id: CircuitId,
    /// Client-provided public inputs, excluding the integrity parameter.
    pub public_inputs: Vec<FieldElement>,
    pub fee: u64,
    /// Constraint count of the referenced circuit.
    pub complexity: u64,
}

impl ProofTransaction {
    pub fn new(
        circuit_id: CircuitId,
        public_inputs: Vec<FieldElement>,
        fee_rate: u64,
        complexity: u64,
    ) -> Self {
        let fee = fee_rate * complexity;
        let mut w = CanonicalWriter::new();
        w.hash(&circuit_id.0);
        w.u64(public_inputs.len() as u64);
        for v in &public_inputs {
            w.u64(v.value());
        }
        w.u64(fee).u64(complexity);
        ProofTransaction { txid: w.digest(), circuit_id, public_inputs, fee, complexity }
    }
}

/// η: hash-chain value binding each proof to its block context and to every
/// earlier proof in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrityParameter(pub Hash256);

impl IntegrityParameter {
    /// Reduces the 32-byte digest to a field element (big-endian mod p) for
    /// injection as a circuit public input.
    pub fn to_field(&self, field: &PrimeField) -> FieldElement {
        field.element_from_bytes_be(&self.0 .0)
    }
}

/// One entry of a block's proof chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLink {
    pub proof_tx: ProofTransaction,
    pub eta: IntegrityParameter,
    pub proof: MockProof,
}

impl ProofLink {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = CanonicalWriter::new();
        w.hash(&self.proof_tx.txid).hash(&self.eta.0).bytes(&self.proof.canonical_bytes());
        w.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockHeader {
    pub prev_hash: Hash256,
    #[serde(with = "serde_miner_addr")]
    pub miner_addr: MinerAddr,
    pub bucket_index: u32,
    /// Merkle root over coin txids.
    pub coin_root: Hash256,
    pub timestamp: u64,
}

mod serde_miner_addr {
    use super::MinerAddr;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(addr: &MinerAddr, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(addr))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MinerAddr, D::Error> {
        let s = String::deserialize(d)?;
        let bytes = hex::decode(&s).map_err(serde::de::Error::custom)?;
        bytes.try_into().map_err(|_| serde::de::Error::custom("miner address must be 20 bytes"))
    }
}

impl BlockHeader {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = CanonicalWriter::new();
        w.hash(&self.prev_hash)
            .bytes(&self.miner_addr)
            .u32(self.bucket_index)
            .hash(&self.coin_root)
            .u64(self.timestamp);
        w.finish()
    }
}

/// Merkle root over txids: pairwise SHA-256, odd leaf duplicated, zero hash
/// for the empty set.
pub fn merkle_root(txids: &[Hash256]) -> Hash256 {
    if txids.is_empty() {
        return Hash256::ZERO;
    }
    let mut level: Vec<Hash256> = txids.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            let right = pair.get(1).unwrap_or(&pair[0]);
            let mut buf = [0u8; 64];
            buf[..32].copy_from_slice(&pair[0].0);
            buf[32..].copy_from_slice(&right.0);
            next.push(sha256(&buf));
        }
        level = next;
    }
    level[0]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub header: BlockHeader,
    pub coin_txs: Vec<CoinTransaction>,
    pub proof_chain: Vec<ProofLink>,
    pub block_hash: Hash256,
}

impl Block {
    /// Hash over canonical header plus the proof chain; this is the value the
    /// lottery compares against the target.
    pub fn compute_hash(header: &BlockHeader, proof_chain: &[ProofLink]) -> Hash256 {
        let mut w = CanonicalWriter::new();
        w.bytes(&header.canonical_bytes());
        w.u64(proof_chain.len() as u64);
        for link in proof_chain {
            w.bytes(&link.canonical_bytes());
        }
        w.digest()
    }

    pub fn new(header: BlockHeader, coin_txs: Vec<CoinTransaction>, proof_chain: Vec<ProofLink>) -> Self {
        let block_hash = Self::compute_hash(&header, &proof_chain);
        Block { header, coin_txs, proof_chain, block_hash }
    }

    pub fn chain_complexities(&self) -> Vec<u64> {
        self.proof_chain.iter().map(|l| l.proof_tx.complexity).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("block serializes")
    }
}

/// κ: expected cumulative constraint-work per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Difficulty {
    kappa: u64,
}

impl Difficulty {
    pub fn new(kappa: u64) -> Self {
        assert!(kappa >= 1, "kappa must be positive");
        Difficulty { kappa }
    }

    pub fn kappa(&self) -> u64 {
        self.kappa
    }
}

/// ψ: weight of accumulated proof-chain work in the lottery odds.
#[derive(Debug, Clone, PartialEq)]
pub struct LotteryParams {
    psi: BigRational,
}

impl LotteryParams {
    pub fn new(psi: BigRational) -> Option<Self> {
        if psi.is_negative() || psi > BigRational::one() {
            return None;
        }
        Some(LotteryParams { psi })
    }

    pub fn zero() -> Self {
        LotteryParams { psi: BigRational::zero() }
    }

    /// Accepts only exactly-representable values (the usual sweep points
    /// 0, 0.25, 0.5, ... all are).
    pub fn from_f64(psi: f64) -> Option<Self> {
        Self::new(BigRational::from_float(psi)?)
    }

    pub fn psi(&self) -> &BigRational {
        &self.psi
    }

    pub fn psi_f64(&self) -> f64 {
        self.psi.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_txid_is_deterministic() {
        let a = CoinTransaction::new(vec![1, 2, 3], 10);
        let b = CoinTransaction::new(vec![1, 2, 3], 10);
        assert_eq!(a.txid, b.txid);
        let c = CoinTransaction::new(vec![1, 2, 4], 10);
        assert_ne!(a.txid, c.txid);
    }

    #[test]
    fn proof_tx_fee_scales_with_complexity() {
        let id = CircuitId(Hash256::ZERO);
        let tx = ProofTransaction::new(id, vec![], 3, 100);
        assert_eq!(tx.fee, 300);
    }

    #[test]
    fn merkle_root_edges() {
        assert_eq!(merkle_root(&[]), Hash256::ZERO);
        let a = sha256(b"a");
        assert_eq!(merkle_root(&[a]), a);
        let b = sha256(b"b");
        let root2 = merkle_root(&[a, b]);
        assert_ne!(root2, a);
        // odd count duplicates the last leaf
        let root3 = merkle_root(&[a, b, a]);
        assert_ne!(root3, root2);
    }

    #[test]
    fn eta_reduction_matches_bytes_be() {
        let f = crate::field::PrimeField::new_unchecked_size(11).unwrap();
        let mut bytes = [0u8; 32];
        bytes[31] = 25; // 25 mod 11 = 3
        let eta = IntegrityParameter(Hash256(bytes));
        assert_eq!(eta.to_field(&f), f.element(3));
    }

    #[test]
    fn lottery_params_range_checked() {
        assert!(LotteryParams::from_f64(0.5).is_some());
        assert!(LotteryParams::from_f64(1.0).is_some());
        assert!(LotteryParams::from_f64(-0.1).is_none());
        assert!(LotteryParams::from_f64(1.1).is_none());
    }

    #[test]
    fn block_json_round_trips() {
        let header = BlockHeader {
            prev_hash: sha256(b"prev"),
            miner_addr: [7u8; 20],
            bucket_index: 2,
            coin_root: Hash256::ZERO,
            timestamp: 42,
        };
        let block = Block::new(header, vec![CoinTransaction::new(vec![1], 5)], vec![]);
        let json = block.to_json();
        let back: Block = serde_json::from_str(&json).unwrap();
        assert_eq!(back, block);
    }
}
