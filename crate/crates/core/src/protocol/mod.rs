//! Consensus protocol layer: chain data model, the integrity (η) hash chain,
//! lottery mathematics, transaction bucketing, the mempool-overlap formula,
//! and block production/verification.

pub mod bucket;
pub mod integrity;
pub mod lottery;
pub mod overlap;
pub mod types;
pub mod verify;

pub use bucket::{bucket_count_policy, bucket_of, BucketError};
pub use integrity::{initial_integrity, next_integrity};
pub use lottery::{
    adjust_difficulty, hash_wins, lottery_draw, lottery_target, lottery_target_bytes, p_win,
    p_win_psi, LotteryError, Probability,
};
pub use overlap::{p_overlap, p_overlap_exact, OverlapError};
pub use types::{
    merkle_root, Block, BlockHeader, CoinTransaction, Difficulty, IntegrityParameter,
    LotteryParams, ProofLink, ProofTransaction,
};
pub use verify::{
    inputs_with_eta, produce_block, verify_block, BlockRejection, CircuitInfo, ProduceError,
    ProofJob,
};
