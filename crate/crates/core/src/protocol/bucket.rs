//! Transaction bucketing: proof transactions are partitioned by a prefix of
//! their txid so that miners racing on the same block work on mostly disjoint
//! subsets of the pending pool.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BucketError {
    #[error("bucket prefix of {0} bits exceeds the 32-bit maximum")]
    PrefixTooLong(u32),
}

/// Bucket index = first `k_bits` bits of the txid, read big-endian. k = 0
/// places everything in bucket 0.
pub fn bucket_of(txid: &crate::hash::Hash256, k_bits: u32) -> Result<u32, BucketError> {
    if k_bits > 32 {
        return Err(BucketError::PrefixTooLong(k_bits));
    }
    if k_bits == 0 {
        return Ok(0);
    }
    let word = u32::from_be_bytes(txid.0[..4].try_into().unwrap());
    Ok(word >> (32 - k_bits))
}

/// Number of prefix bits for the current pool size: k = max(0,
/// floor(log2(pending / target))), so each bucket holds roughly `target`
/// transactions.
pub fn bucket_count_policy(pending: u64, target_per_bucket: u64) -> u32 {
    assert!(target_per_bucket >= 1);
    if pending <= target_per_bucket {
        return 0;
    }
    let ratio = pending / target_per_bucket;
    63 - ratio.leading_zeros() // floor(log2) for ratio >= 1
}
