//! Experiment harnesses: power-ratio fairness (H1), proof-size neutrality
//! (H2), the ψ sweep (H3), the bucket sweep (H4), and the Monte Carlo oracle
//! for the mempool-overlap formula.

use super::config::{
    BucketStrategy, KBitsPolicy, MempoolModel, MinerSpec, ProofSizePreference, SimConfig,
    SimDuration,
};
use super::engine::run_sim;
use super::config::ConfigError;
use crate::protocol::OverlapError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;

/// Reward ratios of a fast miner (power f) against a unit-power miner.
#[derive(Debug, Clone, Serialize)]
pub struct H1Row {
    pub power_ratio: f64,
    pub block_reward_ratio: f64,
    pub proof_reward_ratio: f64,
}

/// Block-reward shares of two equal-power miners with different proof-size
/// preferences.
#[derive(Debug, Clone, Serialize)]
pub struct H2Row {
    pub pair: String,
    pub share_a: f64,
    pub share_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct H3Row {
    pub psi: f64,
    pub wasted_fraction: f64,
    pub gini: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct H4Row {
    pub buckets: u32,
    pub wasted_fraction: f64,
}

/// Two miners with power ratio f ∈ {1,2,3,4} racing in one bucket: block
/// rewards should scale like f, proof rewards like f².
pub fn experiment_h1(blocks: u64, seed: u64) -> Result<Vec<H1Row>, ConfigError> {
    let mut rows = Vec::new();
    for f in [1u64, 2, 3, 4] {
        let miners =
            vec![MinerSpec::uniform("fast", f as f64), MinerSpec::uniform("slow", 1.0)];
        let mut cfg = SimConfig::baseline(miners, 10_000, seed ^ f);
        cfg.duration = SimDuration::Blocks { count: blocks };
        cfg.mempool = MempoolModel::Infinite { c_min: 80, c_max: 120 };
        let m = run_sim(cfg)?;
        let (fast, slow) = (&m.miners[0], &m.miners[1]);
        rows.push(H1Row {
            power_ratio: f as f64,
            block_reward_ratio: fast.block_rewards as f64 / slow.block_rewards as f64,
            proof_reward_ratio: fast.proof_rewards as f64 / slow.proof_rewards as f64,
        });
    }
    Ok(rows)
}

/// Equal-power miners with different proof-size preferences; the cost model
/// uses b = 0 so that proof time is exactly proportional to complexity and
/// win rate per unit time is size-independent.
pub fn experiment_h2(blocks: u64, seed: u64) -> Result<Vec<H2Row>, ConfigError> {
    let kappa = 100_000;
    // C ∈ [κ/1000, κ/100]
    let mempool = MempoolModel::Infinite { c_min: kappa / 1000, c_max: kappa / 100 };
    let pairs: Vec<(&str, ProofSizePreference, ProofSizePreference)> = vec![
        ("uniform_vs_uniform", ProofSizePreference::UniformRandom, ProofSizePreference::UniformRandom),
        ("small_vs_large", ProofSizePreference::PreferSmall, ProofSizePreference::PreferLarge),
        (
            "fixed_vs_fixed_double",
            ProofSizePreference::Fixed { n: kappa / 500 },
            ProofSizePreference::Fixed { n: kappa / 250 },
        ),
    ];
    let mut rows = Vec::new();
    for (i, (label, pref_a, pref_b)) in pairs.into_iter().enumerate() {
        let mut a = MinerSpec::uniform("a", 1.0);
        a.proof_size_preference = pref_a;
        let mut b = MinerSpec::uniform("b", 1.0);
        b.proof_size_preference = pref_b;
        let mut cfg = SimConfig::baseline(vec![a, b], kappa, seed ^ (i as u64));
        cfg.proof_time_b = 0.0;
        cfg.mempool = mempool;
        cfg.duration = SimDuration::Blocks { count: blocks };
        let m = run_sim(cfg)?;
        rows.push(H2Row {
            pair: label.to_string(),
            share_a: m.block_reward_share(0),
            share_b: m.block_reward_share(1),
        });
    }
    Ok(rows)
}

/// 5 miners with powers {1..5}; sweep ψ over {0, 0.25, 0.5, 0.75, 1} and
/// report waste and reward concentration averaged over the given seeds.
pub fn experiment_h3(blocks: u64, seeds: &[u64]) -> Result<Vec<H3Row>, ConfigError> {
    let mut rows = Vec::new();
    for psi in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let mut wasted_sum = 0.0;
        let mut gini_sum = 0.0;
        for &seed in seeds {
            let miners: Vec<MinerSpec> =
                (1..=5).map(|i| MinerSpec::uniform(format!("m{i}"), i as f64)).collect();
            let mut cfg = SimConfig::baseline(miners, 5_000, seed);
            cfg.psi = psi;
            cfg.duration = SimDuration::Blocks { count: blocks };
            let m = run_sim(cfg)?;
            wasted_sum += m.wasted_fraction;
            gini_sum += m.reward_gini;
        }
        let n = seeds.len() as f64;
        rows.push(H3Row { psi, wasted_fraction: wasted_sum / n, gini: gini_sum / n });
    }
    Ok(rows)
}

/// 8 equal miners spreading over {1, 2, 4, 8} buckets with the least-loaded
/// strategy and an effectively infinite mempool.
pub fn experiment_h4(blocks: u64, seed: u64) -> Result<Vec<H4Row>, ConfigError> {
    let mut rows = Vec::new();
    for k in [0u32, 1, 2, 3] {
        let miners: Vec<MinerSpec> = (0..8)
            .map(|i| {
                let mut m = MinerSpec::uniform(format!("m{i}"), 1.0);
                m.bucket_strategy = BucketStrategy::LeastLoaded;
                m
            })
            .collect();
        let mut cfg = SimConfig::baseline(miners, 5_000, seed);
        cfg.k_bits = KBitsPolicy::Fixed { k };
        cfg.duration = SimDuration::Blocks { count: blocks };
        let m = run_sim(cfg)?;
        rows.push(H4Row { buckets: 1 << k, wasted_fraction: m.wasted_fraction });
    }
    Ok(rows)
}

/// Fraction of trials in which two independent uniform t-subsets of an
/// m-element pool intersect; the simulation oracle for `p_overlap`.
pub fn overlap_montecarlo(m: u64, t: u64, trials: u64, seed: u64) -> Result<f64, OverlapError> {
    if m < 2 * t {
        return Err(OverlapError::PoolTooSmall { m, t });
    }
    if t == 0 || trials == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    // Floyd's subset-sampling algorithm: uniform t-subset of [0, m).
    let sample = |rng: &mut ChaCha8Rng| -> HashSet<u64> {
        let mut s = HashSet::with_capacity(t as usize);
        for j in (m - t)..m {
            let r = rng.gen_range(0..=j);
            if !s.insert(r) {
                s.insert(j);
            }
        }
        s
    };
    for _ in 0..trials {
        let a = sample(&mut rng);
        let b = sample(&mut rng);
        if a.iter().any(|x| b.contains(x)) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
