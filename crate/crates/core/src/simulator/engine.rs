//! Deterministic discrete-event simulation of miners racing under the
//! lottery protocol.
//!
//! The paper's stochastic Petri net maps onto this loop as: places = mempool
//! buckets and per-miner partial chains, timed transitions = proof
//! completions under the cost model (a·C + b)/power, immediate transitions =
//! lottery draws and block publication. Proof generation is simulated by the
//! cost model; `real_work` additionally executes a genuine satisfaction check
//! per completed proof.
//!
//! Determinism: every random decision comes from a per-miner (or per-stream)
//! ChaCha generator seeded from the run seed, and the event queue breaks time
//! ties by (event kind, miner index, sequence number).

use super::config::{
    BucketStrategy, KBitsPolicy, MempoolModel, MinerSpec, ProofSizePreference, SimConfig,
    SimDuration,
};
use super::metrics::{gini, mean_var, Metrics, MinerMetrics};
use crate::circuit::synthetic_chain;
use crate::field::PrimeField;
use crate::hash::{sha256, CanonicalWriter};
use crate::protocol::{
    adjust_difficulty, bucket_count_policy, p_win_psi, Difficulty, LotteryParams, Probability,
};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

/// Event queue key with a total, deterministic order.
#[derive(Debug, Clone, Copy, PartialEq)]
struct EventKey {
    time: f64,
    rank: u8,
    miner: u32,
    seq: u64,
}

impl Eq for EventKey {}

impl Ord for EventKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.rank.cmp(&other.rank))
            .then(self.miner.cmp(&other.miner))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for EventKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy)]
enum EventKind {
    /// A miner finished the proof it was working on. Stale if the miner's
    /// generation has advanced past `generation` (chain was reset meanwhile).
    ProofCompleted { miner: usize, generation: u64, complexity: u64 },
    /// Poisson mempool arrival.
    TxArrival,
}

struct MinerState {
    spec: MinerSpec,
    rng: ChaCha8Rng,
    bucket: u32,
    /// Complexities of the current partial proof chain, oldest first.
    chain: Vec<u64>,
    chain_work: u64,
    /// Bumped on every chain reset; invalidates in-flight completions.
    generation: u64,
    idle: bool,
    metrics: MinerMetrics,
}

pub struct SimState {
    config: SimConfig,
    params: LotteryParams,
    kappa: Difficulty,
    k_bits: u32,
    miners: Vec<MinerState>,
    occupancy: Vec<u32>,
    /// Pending complexities per bucket (Poisson mempool only).
    pool: Vec<VecDeque<u64>>,
    arrival_rng: ChaCha8Rng,
    queue: BinaryHeap<Reverse<(EventKey, usize)>>,
    events: Vec<EventKind>,
    seq: u64,
    now: f64,
    blocks: u64,
    blocks_in_window: u64,
    window_start: f64,
    last_block_time: f64,
    interblock: Vec<f64>,
    /// floor(p · 2^128) keyed by (current complexity, prefix work); None
    /// means p = 1. Cleared on retarget.
    target_memo: HashMap<(u64, u64), Option<u128>>,
    real_work: Option<RealWorkChecker>,
}

/// Executes genuine R1CS satisfaction checks sized to each completed proof.
struct RealWorkChecker {
    field: PrimeField,
    cache: HashMap<u64, (crate::circuit::R1CS, crate::circuit::Witness)>,
}

impl RealWorkChecker {
    fn check(&mut self, complexity: u64) {
        let (r1cs, witness) = self.cache.entry(complexity).or_insert_with(|| {
            synthetic_chain(complexity as usize, &self.field, complexity)
        });
        assert_eq!(r1cs.check_satisfaction(witness), Ok(true));
    }
}

fn miner_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut w = CanonicalWriter::new();
    w.u64(seed).u64(index as u64);
    ChaCha8Rng::from_seed(w.digest().0)
}

fn stream_rng(seed: u64, label: &[u8]) -> ChaCha8Rng {
    let mut buf = seed.to_be_bytes().to_vec();
    buf.extend_from_slice(label);
    ChaCha8Rng::from_seed(sha256(&buf).0)
}

/// floor(p · 2^128) as the comparison threshold for a 128-bit uniform draw;
/// None when p = 1 (unconditional win).
fn target_u128(p: &Probability) -> Option<u128> {
    if p.is_one() {
        return None;
    }
    let num = p.as_rational().numer().to_biguint().expect("p >= 0");
    let den = p.as_rational().denom().to_biguint().expect("positive denom");
    let t: BigUint = (num << 128u32) / den;
    if t >= (BigUint::one() << 128) {
        None
    } else {
        Some(t.to_u128().expect("fits after range check"))
    }
}

impl SimState {
    fn new(config: SimConfig) -> Result<Self, super::config::ConfigError> {
        config.validate()?;
        let params = config.lottery_params()?;
        let kappa = config.difficulty();
        let k_bits = match config.k_bits {
            KBitsPolicy::Fixed { k } => k,
            KBitsPolicy::Auto { .. } => 0,
        };
        let buckets = 1usize << k_bits;
        let miners: Vec<MinerState> = config
            .miners
            .iter()
            .enumerate()
            .map(|(i, spec)| MinerState {
                spec: spec.clone(),
                rng: miner_rng(config.seed, i),
                bucket: 0,
                chain: Vec::new(),
                chain_work: 0,
                generation: 0,
                idle: false,
                metrics: MinerMetrics { miner_id: spec.miner_id.clone(), ..Default::default() },
            })
            .collect();
        let real_work = config.real_work.then(|| RealWorkChecker {
            field: PrimeField::default(),
            cache: HashMap::new(),
        });
        Ok(SimState {
            arrival_rng: stream_rng(config.seed, b"arrivals"),
            params,
            kappa,
            k_bits,
            miners,
            occupancy: vec![0; buckets],
            pool: vec![VecDeque::new(); buckets],
            queue: BinaryHeap::new(),
            events: Vec::new(),
            seq: 0,
            now: 0.0,
            blocks: 0,
            blocks_in_window: 0,
            window_start: 0.0,
            last_block_time: 0.0,
            interblock: Vec::new(),
            target_memo: HashMap::new(),
            real_work,
            config,
        })
    }

    fn bucket_count(&self) -> u32 {
        1u32 << self.k_bits
    }

    fn push_event(&mut self, time: f64, rank: u8, miner: u32, kind: EventKind) {
        let key = EventKey { time, rank, miner, seq: self.seq };
        self.seq += 1;
        self.events.push(kind);
        self.queue.push(Reverse((key, self.events.len() - 1)));
    }

    fn pick_bucket(&mut self, index: usize) {
        let buckets = self.bucket_count();
        let old = self.miners[index].bucket as usize;
        self.occupancy[old] = self.occupancy[old].saturating_sub(1);
        let choice = match self.miners[index].spec.bucket_strategy {
            BucketStrategy::Random => self.miners[index].rng.gen_range(0..buckets),
            BucketStrategy::Fixed { index } => index.min(buckets - 1),
            BucketStrategy::LeastLoaded => self
                .occupancy
                .iter()
                .enumerate()
                .min_by_key(|(i, &n)| (n, *i))
                .map(|(i, _)| i as u32)
                .unwrap(),
        };
        self.miners[index].bucket = choice;
        self.occupancy[choice as usize] += 1;
    }

    /// Draws a job complexity according to the miner's preference over the
    /// mempool's configured range.
    fn draw_complexity(rng: &mut ChaCha8Rng, pref: ProofSizePreference, range: (u64, u64)) -> u64 {
        let (lo, hi) = range;
        let span = hi - lo;
        match pref {
            ProofSizePreference::UniformRandom => rng.gen_range(lo..=hi),
            ProofSizePreference::PreferSmall => rng.gen_range(lo..=lo + span / 10),
            ProofSizePreference::PreferLarge => rng.gen_range(hi - span / 10..=hi),
            ProofSizePreference::Fixed { n } => n,
        }
    }

    /// Starts the miner's next proof job, or marks it idle when its bucket
    /// has no pending transactions (finite mempool only).
    fn start_next_proof(&mut self, index: usize) {
        let range = self.config.mempool.complexity_range();
        let bucket = self.miners[index].bucket as usize;
        let complexity = match self.config.mempool {
            MempoolModel::Infinite { .. } => {
                let m = &mut self.miners[index];
                Self::draw_complexity(&mut m.rng, m.spec.proof_size_preference, range)
            }
            MempoolModel::Poisson { .. } => {
                let pending = &mut self.pool[bucket];
                if pending.is_empty() {
                    self.miners[index].idle = true;
                    return;
                }
                let pos = match self.miners[index].spec.proof_size_preference {
                    ProofSizePreference::UniformRandom | ProofSizePreference::Fixed { .. } => {
                        self.miners[index].rng.gen_range(0..pending.len())
                    }
                    ProofSizePreference::PreferSmall => pending
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, &c)| c)
                        .map(|(i, _)| i)
                        .unwrap(),
                    ProofSizePreference::PreferLarge => pending
                        .iter()
                        .enumerate()
                        .max_by_key(|(_, &c)| c)
                        .map(|(i, _)| i)
                        .unwrap(),
                };
                pending.remove(pos).unwrap()
            }
        };
        let m = &mut self.miners[index];
        m.idle = false;
        let duration =
            (self.config.proof_time_a * complexity as f64 + self.config.proof_time_b) / m.spec.power;
        let generation = m.generation;
        self.push_event(
            self.now + duration,
            0,
            index as u32,
            EventKind::ProofCompleted { miner: index, generation, complexity },
        );
    }

    fn schedule_next_arrival(&mut self) {
        if let MempoolModel::Poisson { rate, .. } = self.config.mempool {
            let u: f64 = self.arrival_rng.gen();
            let dt = -(1.0 - u).ln() / rate;
            self.push_event(self.now + dt, 1, u32::MAX, EventKind::TxArrival);
        }
    }

    fn lottery_win(&mut self, index: usize) -> bool {
        let current = *self.miners[index].chain.last().expect("chain nonempty at draw");
        let prefix = self.miners[index].chain_work - current;
        let key = (current, prefix);
        let target = match self.target_memo.get(&key) {
            Some(t) => *t,
            None => {
                let p = p_win_psi(&self.miners[index].chain, &self.kappa, &self.params)
                    .expect("nonempty chain");
                let t = target_u128(&p);
                self.target_memo.insert(key, t);
                t
            }
        };
        match target {
            None => true,
            Some(t) => self.miners[index].rng.gen::<u128>() < t,
        }
    }

    /// Resets a miner's partial chain, counting its work as wasted, and
    /// invalidates any in-flight proof. In the finite mempool the chain's
    /// transactions return to the pool (they were never included in a block).
    fn reset_miner(&mut self, index: usize) {
        let bucket = self.miners[index].bucket as usize;
        let m = &mut self.miners[index];
        m.metrics.wasted_work += m.chain_work;
        if matches!(self.config.mempool, MempoolModel::Poisson { .. }) {
            for &c in &m.chain {
                self.pool[bucket].push_back(c);
            }
        }
        m.chain.clear();
        m.chain_work = 0;
        m.generation += 1;
    }

    fn publish_block(&mut self, winner: usize) {
        let bucket = self.miners[winner].bucket;
        // Winner converts its whole chain into a block.
        {
            let m = &mut self.miners[winner];
            m.metrics.blocks_won += 1;
            m.metrics.block_rewards += self.config.block_reward;
            m.metrics.proof_rewards += self.config.proof_fee_rate * m.chain_work;
            m.metrics.useful_work += m.chain_work;
            m.chain.clear();
            m.chain_work = 0;
            m.generation += 1;
        }
        self.blocks += 1;
        self.blocks_in_window += 1;
        self.interblock.push(self.now - self.last_block_time);
        self.last_block_time = self.now;

        // Same-bucket competitors lose their partial chains and restart.
        let losers: Vec<usize> = (0..self.miners.len())
            .filter(|&i| i != winner && self.miners[i].bucket == bucket)
            .collect();
        for i in losers {
            self.reset_miner(i);
            self.pick_bucket(i);
            self.start_next_proof(i);
        }
        self.pick_bucket(winner);
        self.start_next_proof(winner);

        if self.blocks_in_window >= self.config.retarget_window {
            self.retarget();
        }
    }

    fn retarget(&mut self) {
        let actual = (self.now - self.window_start).max(f64::MIN_POSITIVE);
        let target = self.config.retarget_window as f64 * self.config.target_block_time;
        self.kappa = adjust_difficulty(&self.kappa, actual, target);
        self.target_memo.clear();
        self.window_start = self.now;
        self.blocks_in_window = 0;

        if let KBitsPolicy::Auto { target_per_bucket } = self.config.k_bits {
            let pending: u64 = self.pool.iter().map(|q| q.len() as u64).sum();
            let k = bucket_count_policy(pending, target_per_bucket).min(16);
            if k != self.k_bits {
                self.k_bits = k;
                let buckets = 1usize << k;
                // Re-shard the pool by round-robin (tx identities are not
                // modeled) and re-seat every miner without resetting chains.
                let mut all: Vec<u64> = self.pool.iter_mut().flat_map(|q| q.drain(..)).collect();
                self.pool = vec![VecDeque::new(); buckets];
                for (i, c) in all.drain(..).enumerate() {
                    self.pool[i % buckets].push_back(c);
                }
                self.occupancy = vec![0; buckets];
                for i in 0..self.miners.len() {
                    self.miners[i].bucket = 0;
                    self.occupancy[0] += 1;
                }
                for i in 0..self.miners.len() {
                    self.pick_bucket(i);
                }
            }
        }
    }

    fn done(&self) -> bool {
        match self.config.duration {
            SimDuration::Blocks { count } => self.blocks >= count,
            SimDuration::Time { .. } => false, // handled at event pop
        }
    }

    fn finish(mut self) -> Metrics {
        // Leftover partial chains never made it into a block.
        for i in 0..self.miners.len() {
            let work = self.miners[i].chain_work;
            self.miners[i].metrics.wasted_work += work;
            self.miners[i].chain.clear();
            self.miners[i].chain_work = 0;
        }
        let per_miner: Vec<MinerMetrics> = self.miners.into_iter().map(|m| m.metrics).collect();
        let useful: u64 = per_miner.iter().map(|m| m.useful_work).sum();
        let wasted: u64 = per_miner.iter().map(|m| m.wasted_work).sum();
        let total_proofs: u64 = per_miner.iter().map(|m| m.proofs_completed).sum();
        let (mean, var) = mean_var(&self.interblock);
        let rewards: Vec<f64> = per_miner.iter().map(|m| m.total_rewards() as f64).collect();
        Metrics {
            blocks: self.blocks,
            sim_time: self.now,
            total_proofs,
            wasted_fraction: if useful + wasted > 0 {
                wasted as f64 / (useful + wasted) as f64
            } else {
                0.0
            },
            mean_interblock_time: mean,
            var_interblock_time: var,
            reward_gini: gini(&rewards).unwrap_or(f64::NAN),
            final_kappa: self.kappa.kappa(),
            miners: per_miner,
        }
    }
}

/// Runs one simulation to completion. Deterministic: identical configs
/// (seed included) produce identical metrics.
pub fn run_sim(config: SimConfig) -> Result<Metrics, super::config::ConfigError> {
    let mut state = SimState::new(config)?;

    // Initial bucket assignment in miner order, then first jobs.
    for i in 0..state.miners.len() {
        state.occupancy[0] += 1; // placeholder slot released by pick_bucket
        state.miners[i].bucket = 0;
    }
    for i in 0..state.miners.len() {
        state.pick_bucket(i);
    }
    state.schedule_next_arrival();
    for i in 0..state.miners.len() {
        state.start_next_proof(i);
    }

    while let Some(Reverse((key, idx))) = state.queue.pop() {
        if let SimDuration::Time { limit } = state.config.duration {
            if key.time > limit {
                state.now = limit;
                break;
            }
        }
        state.now = key.time;
        match state.events[idx] {
            EventKind::TxArrival => {
                let (lo, hi) = state.config.mempool.complexity_range();
                let c = state.arrival_rng.gen_range(lo..=hi);
                let bucket = state.arrival_rng.gen_range(0..state.bucket_count()) as usize;
                state.pool[bucket].push_back(c);
                state.schedule_next_arrival();
                // Wake idle miners in this bucket, lowest index first.
                let idle: Vec<usize> = (0..state.miners.len())
                    .filter(|&i| state.miners[i].idle && state.miners[i].bucket as usize == bucket)
                    .collect();
                for i in idle {
                    if !state.pool[bucket].is_empty() {
                        state.start_next_proof(i);
                    }
                }
            }
            EventKind::ProofCompleted { miner, generation, complexity } => {
                if state.miners[miner].generation != generation {
                    continue; // stale: chain was reset while this proof ran
                }
                if let Some(checker) = state.real_work.as_mut() {
                    checker.check(complexity);
                }
                {
                    let m = &mut state.miners[miner];
                    m.chain.push(complexity);
                    m.chain_work += complexity;
                    m.metrics.proofs_completed += 1;
                }
                if state.lottery_win(miner) {
                    state.publish_block(miner);
                    if state.done() {
                        break;
                    }
                } else {
                    state.start_next_proof(miner);
                }
            }
        }
    }
    Ok(state.finish())
}
