//! `pouw sim run` — one simulation run with CSV metrics output.

use super::{write_csv, Ctx};
use crate::CliError;
use pouw_core::simulator::{run_sim, KBitsPolicy, SimDuration};
use serde::Serialize;

#[derive(Serialize)]
struct MinerRow {
    psi: f64,
    seed: u64,
    miner_id: String,
    power: f64,
    blocks_won: u64,
    block_rewards: u64,
    proof_rewards: u64,
    useful_work: u64,
    wasted_work: u64,
    proofs_completed: u64,
}

#[derive(Serialize)]
struct SummaryRow {
    psi: f64,
    seed: u64,
    kappa0: u64,
    blocks: u64,
    sim_time: f64,
    total_proofs: u64,
    wasted_fraction: f64,
    mean_interblock_time: f64,
    var_interblock_time: f64,
    reward_gini: f64,
    final_kappa: u64,
}

pub fn run(
    ctx: &Ctx,
    psi: Option<f64>,
    blocks: Option<u64>,
    kappa: Option<u64>,
    k_bits: Option<u32>,
) -> Result<(), CliError> {
    let mut cfg = ctx.app.sim.clone();
    cfg.seed = ctx.seed;
    if let Some(p) = psi {
        cfg.psi = p;
    }
    if let Some(count) = blocks {
        cfg.duration = SimDuration::Blocks { count };
    }
    if let Some(k0) = kappa {
        cfg.kappa0 = k0;
    }
    if let Some(k) = k_bits {
        cfg.k_bits = KBitsPolicy::Fixed { k };
    }
    cfg.validate().map_err(|e| CliError::Usage(format!("invalid simulation config: {e}")))?;

    let powers: Vec<f64> = cfg.miners.iter().map(|m| m.power).collect();
    let (psi, seed, kappa0) = (cfg.psi, cfg.seed, cfg.kappa0);
    let metrics =
        run_sim(cfg).map_err(|e| CliError::Usage(format!("invalid simulation config: {e}")))?;

    let miner_rows: Vec<MinerRow> = metrics
        .miners
        .iter()
        .zip(&powers)
        .map(|(m, &power)| MinerRow {
            psi,
            seed,
            miner_id: m.miner_id.clone(),
            power,
            blocks_won: m.blocks_won,
            block_rewards: m.block_rewards,
            proof_rewards: m.proof_rewards,
            useful_work: m.useful_work,
            wasted_work: m.wasted_work,
            proofs_completed: m.proofs_completed,
        })
        .collect();
    let summary = SummaryRow {
        psi,
        seed,
        kappa0,
        blocks: metrics.blocks,
        sim_time: metrics.sim_time,
        total_proofs: metrics.total_proofs,
        wasted_fraction: metrics.wasted_fraction,
        mean_interblock_time: metrics.mean_interblock_time,
        var_interblock_time: metrics.var_interblock_time,
        reward_gini: metrics.reward_gini,
        final_kappa: metrics.final_kappa,
    };

    let miners_path = ctx.out_path("sim_miners.csv");
    let summary_path = ctx.out_path("sim_summary.csv");
    write_csv(&miners_path, &miner_rows)?;
    write_csv(&summary_path, &[summary])?;
    println!(
        "blocks={} time={:.3} wasted_fraction={:.4} gini={:.4} final_kappa={}",
        metrics.blocks,
        metrics.sim_time,
        metrics.wasted_fraction,
        metrics.reward_gini,
        metrics.final_kappa
    );
    println!("wrote {}", miners_path.display());
    println!("wrote {}", summary_path.display());
    Ok(())
}
