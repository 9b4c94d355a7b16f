//! Run metrics: per-miner reward/work accounting, global waste and timing
//! statistics, and the Gini coefficient used as the centralization measure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MetricsError {
    #[error("gini is undefined for an empty input")]
    Empty,
    #[error("gini is undefined when all values are zero")]
    AllZero,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MinerMetrics {
    pub miner_id: String,
    pub blocks_won: u64,
    pub block_rewards: u64,
    /// Fees of the miner's own proofs included in blocks it published.
    pub proof_rewards: u64,
    /// Constraint-work that ended up in a published block.
    pub useful_work: u64,
    /// Constraint-work in discarded partial chains (including end-of-run
    /// leftovers).
    pub wasted_work: u64,
    pub proofs_completed: u64,
}

impl MinerMetrics {
    pub fn total_rewards(&self) -> u64 {
        self.block_rewards + self.proof_rewards
    }

    pub fn total_work(&self) -> u64 {
        self.useful_work + self.wasted_work
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub miners: Vec<MinerMetrics>,
    pub blocks: u64,
    pub sim_time: f64,
    pub total_proofs: u64,
    /// Σ wasted / Σ (useful + wasted) over all miners.
    pub wasted_fraction: f64,
    pub mean_interblock_time: f64,
    pub var_interblock_time: f64,
    /// Gini over per-miner total rewards; NaN when undefined (no rewards).
    pub reward_gini: f64,
    pub final_kappa: u64,
}

impl Metrics {
    pub fn interblock_cv(&self) -> f64 {
        self.var_interblock_time.sqrt() / self.mean_interblock_time
    }

    pub fn block_share(&self, miner_index: usize) -> f64 {
        self.miners[miner_index].blocks_won as f64 / self.blocks as f64
    }

    pub fn block_reward_share(&self, miner_index: usize) -> f64 {
        let total: u64 = self.miners.iter().map(|m| m.block_rewards).sum();
        self.miners[miner_index].block_rewards as f64 / total as f64
    }
}

/// Standard Gini coefficient via the sorted-rank formula:
/// G = Σ_i (2i − n − 1)·x_(i) / (n · Σ x), i = 1..n over ascending x.
pub fn gini(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum();
    if total <= 0.0 {
        return Err(MetricsError::AllZero);
    }
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok(weighted / (n * total))
}

/// Sample mean and (population) variance.
pub fn mean_var(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_equal_values_is_zero() {
        assert!(gini(&[3.0, 3.0, 3.0, 3.0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gini_maximal_inequality() {
        // one nonzero among n → (n−1)/n
        for n in [2usize, 5, 10] {
            let mut v = vec![0.0; n];
            v[0] = 7.0;
            let g = gini(&v).unwrap();
            let expected = (n as f64 - 1.0) / n as f64;
            assert!((g - expected).abs() < 1e-12, "n={n}: {g}");
        }
    }

    #[test]
    fn gini_arithmetic_sequence() {
        // {1,2,3,4,5} → 4/15
        let g = gini(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!((g - 4.0 / 15.0).abs() < 1e-12, "{g}");
        // order-insensitive
        let g2 = gini(&[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn gini_error_cases() {
        assert_eq!(gini(&[]), Err(MetricsError::Empty));
        assert_eq!(gini(&[0.0, 0.0]), Err(MetricsError::AllZero));
    }

    #[test]
    fn mean_var_basics() {
        let (m, v) = mean_var(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert!((m - 5.0).abs() < 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
