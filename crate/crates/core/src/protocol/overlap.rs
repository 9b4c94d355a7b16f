//! Probability that two miners drawing `t` proof transactions without
//! replacement from a shared pool of `m` collide on at least one.
//!
//! P_overlap(m, t) = 1 − C(m−t, t) / C(m, t), computed exactly with
//! big-integer binomials.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OverlapError {
    #[error("pool of {m} cannot supply two disjoint selections of {t}")]
    PoolTooSmall { m: u64, t: u64 },
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact overlap probability as a rational. Requires m ≥ 2t so a disjoint
/// second selection exists; t = 0 trivially never overlaps.
pub fn p_overlap_exact(m: u64, t: u64) -> Result<BigRational, OverlapError> {
    if m < 2 * t {
        return Err(OverlapError::PoolTooSmall { m, t });
    }
    if t == 0 {
        return Ok(BigRational::from_integer(0.into()));
    }
    let disjoint = BigRational::new(binomial(m - t, t).into(), binomial(m, t).into());
    Ok(BigRational::one() - disjoint)
}

pub fn p_overlap(m: u64, t: u64) -> Result<f64, OverlapError> {
    Ok(p_overlap_exact(m, t)?.to_f64().unwrap())
}
