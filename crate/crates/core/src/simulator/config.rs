//! Simulation configuration: miner population, lottery and difficulty
//! parameters, the proof-time cost model, mempool model, and run duration.

use crate::protocol::{Difficulty, LotteryParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum ConfigError {
    #[error("simulation needs at least one miner")]
    NoMiners,
    #[error("miner {0} has non-positive power")]
    NonPositivePower(usize),
    #[error("psi {0} outside [0, 1]")]
    PsiOutOfRange(f64),
    #[error("cost model must have a > 0 and b >= 0")]
    BadCostModel,
    #[error("complexity range [{0}, {1}] is empty or starts at zero")]
    BadComplexityRange(u64, u64),
    #[error("bucket prefix of {0} bits exceeds the 32-bit maximum")]
    KBitsTooLarge(u32),
    #[error("retarget window must be >= 1 and target block time positive")]
    BadRetarget,
    #[error("duration must be positive")]
    BadDuration,
    #[error("arrival rate must be positive")]
    BadArrivalRate,
    #[error("miner {miner} uses fixed bucket {bucket} but only {available} buckets exist")]
    FixedBucketOutOfRange { miner: usize, bucket: u32, available: u32 },
}

/// How a miner picks the complexity of its next proof job.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProofSizePreference {
    /// Uniform over the mempool's complexity range.
    UniformRandom,
    /// Uniform over the bottom tenth of the range.
    PreferSmall,
    /// Uniform over the top tenth of the range.
    PreferLarge,
    /// Always exactly n.
    Fixed { n: u64 },
}

/// How a miner chooses which bucket to work when starting a fresh chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BucketStrategy {
    Random,
    /// Bucket currently occupied by the fewest miners (ties to the lowest
    /// index).
    LeastLoaded,
    Fixed { index: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinerSpec {
    pub miner_id: String,
    /// Work units per time unit.
    pub power: f64,
    pub proof_size_preference: ProofSizePreference,
    pub bucket_strategy: BucketStrategy,
}

impl MinerSpec {
    /// Equal-power miner with neutral preferences; the common test case.
    pub fn uniform(miner_id: impl Into<String>, power: f64) -> Self {
        MinerSpec {
            miner_id: miner_id.into(),
            power,
            proof_size_preference: ProofSizePreference::UniformRandom,
            bucket_strategy: BucketStrategy::Random,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MempoolModel {
    /// Every miner always finds a job; complexities drawn uniformly from
    /// [c_min, c_max] filtered by preference.
    Infinite { c_min: u64, c_max: u64 },
    /// Poisson arrivals at `rate` per time unit into a shared pool;
    /// complexities uniform over [c_min, c_max]. Miners idle when their
    /// bucket is empty.
    Poisson { rate: f64, c_min: u64, c_max: u64 },
}

impl MempoolModel {
    pub fn complexity_range(&self) -> (u64, u64) {
        match *self {
            MempoolModel::Infinite { c_min, c_max } | MempoolModel::Poisson { c_min, c_max, .. } => {
                (c_min, c_max)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SimDuration {
    Blocks { count: u64 },
    Time { limit: f64 },
}

/// Bucket prefix width: fixed, or recomputed from pool occupancy at each
/// retarget boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KBitsPolicy {
    Fixed { k: u32 },
    Auto { target_per_bucket: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub miners: Vec<MinerSpec>,
    pub kappa0: u64,
    pub psi: f64,
    pub k_bits: KBitsPolicy,
    /// Proof time = (a·C + b) / power.
    pub proof_time_a: f64,
    pub proof_time_b: f64,
    pub block_reward: u64,
    /// Fee credited per constraint of an included proof.
    pub proof_fee_rate: u64,
    pub retarget_window: u64,
    pub target_block_time: f64,
    pub mempool: MempoolModel,
    pub duration: SimDuration,
    pub seed: u64,
    /// Run an actual satisfaction check per completed proof (small runs only).
    pub real_work: bool,
}

impl SimConfig {
    /// Single-bucket baseline: fill in miners, κ, and duration; tune the rest
    /// per experiment.
    pub fn baseline(miners: Vec<MinerSpec>, kappa0: u64, seed: u64) -> Self {
        SimConfig {
            miners,
            kappa0,
            psi: 0.0,
            k_bits: KBitsPolicy::Fixed { k: 0 },
            proof_time_a: 1.0,
            proof_time_b: 0.0,
            block_reward: 50,
            proof_fee_rate: 1,
            retarget_window: u64::MAX, // effectively off
            target_block_time: 1.0,
            mempool: MempoolModel::Infinite { c_min: 80, c_max: 120 },
            duration: SimDuration::Blocks { count: 1000 },
            seed,
            real_work: false,
        }
    }

    pub fn lottery_params(&self) -> Result<LotteryParams, ConfigError> {
        LotteryParams::from_f64(self.psi).ok_or(ConfigError::PsiOutOfRange(self.psi))
    }

    pub fn difficulty(&self) -> Difficulty {
        Difficulty::new(self.kappa0.max(1))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.miners.is_empty() {
            return Err(ConfigError::NoMiners);
        }
        for (i, m) in self.miners.iter().enumerate() {
            if !(m.power > 0.0 && m.power.is_finite()) {
                return Err(ConfigError::NonPositivePower(i));
            }
        }
        self.lottery_params()?;
        if !(self.proof_time_a > 0.0) || !(self.proof_time_b >= 0.0) {
            return Err(ConfigError::BadCostModel);
        }
        let (c_min, c_max) = self.mempool.complexity_range();
        if c_min == 0 || c_min > c_max {
            return Err(ConfigError::BadComplexityRange(c_min, c_max));
        }
        if let MempoolModel::Poisson { rate, .. } = self.mempool {
            if !(rate > 0.0) {
                return Err(ConfigError::BadArrivalRate);
            }
        }
        if self.retarget_window == 0 || !(self.target_block_time > 0.0) {
            return Err(ConfigError::BadRetarget);
        }
        let k = match self.k_bits {
            KBitsPolicy::Fixed { k } => k,
            KBitsPolicy::Auto { target_per_bucket } => {
                if target_per_bucket == 0 {
                    return Err(ConfigError::BadComplexityRange(0, 0));
                }
                0
            }
        };
        if k > 32 {
            return Err(ConfigError::KBitsTooLarge(k));
        }
        let buckets = 1u64 << k.min(31);
        for (i, m) in self.miners.iter().enumerate() {
            if let BucketStrategy::Fixed { index } = m.bucket_strategy {
                if u64::from(index) >= buckets {
                    return Err(ConfigError::FixedBucketOutOfRange {
                        miner: i,
                        bucket: index,
                        available: buckets as u32,
                    });
                }
            }
        }
        match self.duration {
            SimDuration::Blocks { count } if count == 0 => Err(ConfigError::BadDuration),
            SimDuration::Time { limit } if !(limit > 0.0) => Err(ConfigError::BadDuration),
            _ => Ok(()),
        }
    }
}
