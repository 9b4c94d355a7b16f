//! `pouw experiment` — reproduce the fairness, neutrality, ψ-sweep, bucket,
//! and overlap experiments and write one CSV per experiment.

use super::{write_csv, Ctx};
use crate::CliError;
use pouw_core::protocol::p_overlap;
use pouw_core::simulator::{
    experiment_h1, experiment_h2, experiment_h3, experiment_h4, overlap_montecarlo,
};
use serde::Serialize;

fn sim_err(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("experiment config invalid: {e}"))
}

pub fn h1(ctx: &Ctx, blocks: u64) -> Result<(), CliError> {
    let rows = experiment_h1(blocks, ctx.seed).map_err(sim_err)?;
    let path = ctx.out_path("h1.csv");
    write_csv(&path, &rows)?;
    for r in &rows {
        println!(
            "f={:.0} block_reward_ratio={:.3} proof_reward_ratio={:.3}",
            r.power_ratio, r.block_reward_ratio, r.proof_reward_ratio
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn h2(ctx: &Ctx, blocks: u64) -> Result<(), CliError> {
    let rows = experiment_h2(blocks, ctx.seed).map_err(sim_err)?;
    let path = ctx.out_path("h2.csv");
    write_csv(&path, &rows)?;
    for r in &rows {
        println!("pair={} share_a={:.3} share_b={:.3}", r.pair, r.share_a, r.share_b);
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn h3(ctx: &Ctx, blocks: u64, seeds: &str) -> Result<(), CliError> {
    let seeds: Vec<u64> = seeds
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad seed '{s}'"))))
        .collect::<Result<_, _>>()?;
    if seeds.is_empty() {
        return Err(CliError::Usage("at least one seed required".into()));
    }
    let rows = experiment_h3(blocks, &seeds).map_err(sim_err)?;
    let path = ctx.out_path("h3.csv");
    write_csv(&path, &rows)?;
    for r in &rows {
        println!("psi={:.2} wasted_fraction={:.4} gini={:.4}", r.psi, r.wasted_fraction, r.gini);
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn h4(ctx: &Ctx, blocks: u64) -> Result<(), CliError> {
    let rows = experiment_h4(blocks, ctx.seed).map_err(sim_err)?;
    let path = ctx.out_path("h4.csv");
    write_csv(&path, &rows)?;
    for r in &rows {
        println!("buckets={} wasted_fraction={:.4}", r.buckets, r.wasted_fraction);
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct OverlapRow {
    m: u64,
    t: u64,
    trials: u64,
    analytic: f64,
    montecarlo: f64,
    abs_error: f64,
}

pub fn overlap(ctx: &Ctx, m: Option<u64>, t: Option<u64>, trials: u64) -> Result<(), CliError> {
    let pairs: Vec<(u64, u64)> = match (m, t) {
        (Some(m), Some(t)) => vec![(m, t)],
        (None, None) => vec![(20, 5), (100, 10), (1000, 50)],
        _ => return Err(CliError::Usage("--m and --t must be given together".into())),
    };
    let mut rows = Vec::new();
    for (m, t) in pairs {
        let analytic = p_overlap(m, t).map_err(|e| CliError::Usage(e.to_string()))?;
        let montecarlo =
            overlap_montecarlo(m, t, trials, ctx.seed).map_err(|e| CliError::Usage(e.to_string()))?;
        rows.push(OverlapRow {
            m,
            t,
            trials,
            analytic,
            montecarlo,
            abs_error: (analytic - montecarlo).abs(),
        });
    }
    let path = ctx.out_path("overlap.csv");
    write_csv(&path, &rows)?;
    for r in &rows {
        println!(
            "m={} t={} analytic={:.6} montecarlo={:.6} abs_error={:.6}",
            r.m, r.t, r.analytic, r.montecarlo, r.abs_error
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
