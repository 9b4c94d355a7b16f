//! Deterministic discrete-event simulator for the mining protocol, plus the
//! experiment harnesses that reproduce the reward-fairness, complexity-
//! neutrality, ψ-sweep, and bucketing studies.

pub mod config;
pub mod engine;
pub mod experiments;
pub mod metrics;

pub use config::{
    BucketStrategy, ConfigError, KBitsPolicy, MempoolModel, MinerSpec, ProofSizePreference,
    SimConfig, SimDuration,
};
pub use engine::run_sim;
pub use experiments::{
    experiment_h1, experiment_h2, experiment_h3, experiment_h4, overlap_montecarlo, H1Row, H2Row,
    H3Row, H4Row,
};
pub use metrics::{gini, mean_var, Metrics, MetricsError, MinerMetrics};
