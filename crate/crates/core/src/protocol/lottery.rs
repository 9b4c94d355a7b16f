//! Lottery mathematics: win probabilities, the 256-bit target, draws, and
//! difficulty retargeting.
//!
//! The plain win probability for the i-th proof in a chain is C_i / κ; the
//! ψ-extended form adds ψ times the accumulated complexity of earlier chain
//! entries. Both clamp at 1 since κ retargeting keeps C ≪ κ in practice.

use super::types::{Block, Difficulty, LotteryParams};
use crate::hash::Hash256;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LotteryError {
    #[error("proof chain is empty")]
    EmptyChain,
}

/// Exact probability in [0, 1].
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new_clamped(r: BigRational) -> Self {
        if r < BigRational::zero() {
            Probability(BigRational::zero())
        } else if r > BigRational::one() {
            Probability(BigRational::one())
        } else {
            Probability(r)
        }
    }

    pub fn zero() -> Self {
        Probability(BigRational::zero())
    }

    pub fn one() -> Self {
        Probability(BigRational::one())
    }

    pub fn from_ratio(num: u64, den: u64) -> Self {
        assert!(den > 0);
        Self::new_clamped(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// P_win = min(C_i / κ, 1).
pub fn p_win(c_i: u64, kappa: &Difficulty) -> Probability {
    assert!(c_i >= 1, "complexity must be positive");
    Probability::from_ratio(c_i, kappa.kappa())
}

/// ψ-extended odds over the whole proof chain (last entry is the current
/// proof): min(C_i/κ + ψ·Σ_{j<i} C_j/κ, 1).
pub fn p_win_psi(
    chain_complexities: &[u64],
    kappa: &Difficulty,
    params: &LotteryParams,
) -> Result<Probability, LotteryError> {
    let (&current, prefix) = chain_complexities.split_last().ok_or(LotteryError::EmptyChain)?;
    let kappa_big = BigInt::from(kappa.kappa());
    let prefix_sum: u64 = prefix.iter().sum();
    let base = BigRational::new(BigInt::from(current), kappa_big.clone());
    let bonus =
        params.psi() * BigRational::new(BigInt::from(prefix_sum), kappa_big);
    Ok(Probability::new_clamped(base + bonus))
}

/// target = floor(p · 2^256); a candidate hash wins iff, read as a big-endian
/// integer, it is strictly below the target.
pub fn lottery_target(p: &Probability) -> BigUint {
    let two256 = BigUint::one() << 256;
    let num = p.as_rational().numer().to_biguint().expect("p >= 0");
    let den = p.as_rational().denom().to_biguint().expect("positive denom");
    num * two256 / den
}

/// Target as a fixed 32-byte big-endian value, or `None` when p = 1 (every
/// hash wins; 2^256 does not fit). Byte-wise lexicographic comparison against
/// this equals the big-integer comparison, which is what the simulator's hot
/// path uses.
pub fn lottery_target_bytes(p: &Probability) -> Option<[u8; 32]> {
    let t = lottery_target(p);
    if t >= (BigUint::one() << 256) {
        return None;
    }
    let bytes = t.to_bytes_be();
    let mut out = [0u8; 32];
    out[32 - bytes.len()..].copy_from_slice(&bytes);
    Some(out)
}

pub fn hash_wins(hash: &Hash256, target_bytes: Option<&[u8; 32]>) -> bool {
    match target_bytes {
        None => true,
        Some(t) => hash.0[..] < t[..],
    }
}

/// Deterministic draw for a candidate block: block_hash < floor(p · 2^256).
pub fn lottery_draw(candidate: &Block, p: &Probability) -> Result<bool, LotteryError> {
    if candidate.proof_chain.is_empty() {
        return Err(LotteryError::EmptyChain);
    }
    let target = lottery_target_bytes(p);
    Ok(hash_wins(&candidate.block_hash, target.as_ref()))
}

/// Bitcoin-style retarget with a clamp factor of 4 per window:
/// κ' = clamp(κ · target/actual, κ/4, 4κ), rounded to nearest, floor 1.
pub fn adjust_difficulty(
    kappa: &Difficulty,
    actual_window_time: f64,
    target_window_time: f64,
) -> Difficulty {
    assert!(actual_window_time > 0.0 && target_window_time > 0.0);
    let k = kappa.kappa() as f64;
    let raw = k * target_window_time / actual_window_time;
    let clamped = raw.clamp(k / 4.0, k * 4.0);
    Difficulty::new((clamped.round() as u64).max(1))
}
