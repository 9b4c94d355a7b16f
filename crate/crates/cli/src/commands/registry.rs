//! `pouw registry` — register circuits through the simulated subnetwork and
//! query the resulting records. State lives in a JSON-lines event log that is
//! replayed on load.

use super::{read_source, Ctx};
use crate::CliError;
use pouw_core::hash::Hash256;
use pouw_core::registry::{RegistryConfig, RegistryNode, RegistryState};
use pouw_core::CircuitId;
use std::path::{Path, PathBuf};

fn registry_config(ctx: &Ctx) -> RegistryConfig {
    let s = &ctx.app.registry;
    RegistryConfig {
        min_stake: s.min_stake,
        slash_percent: s.slash_percent,
        min_registration_fee: s.min_registration_fee,
    }
}

/// Node set is derived from config alone so a saved log replays cleanly.
fn initial_nodes(ctx: &Ctx) -> Vec<RegistryNode> {
    (0..ctx.app.registry.nodes)
        .map(|i| RegistryNode::new(vec![i as u8], ctx.app.registry.node_stake))
        .collect()
}

fn state_path(ctx: &Ctx, state: Option<&Path>) -> PathBuf {
    state.map(Path::to_path_buf).unwrap_or_else(|| ctx.out_path("registry.jsonl"))
}

fn load_state(ctx: &Ctx, path: &Path) -> Result<RegistryState, CliError> {
    if path.exists() {
        let events = RegistryState::load_events(path)
            .map_err(|e| CliError::Domain(format!("{}: corrupt event log: {e}", path.display())))?;
        RegistryState::replay(registry_config(ctx), initial_nodes(ctx), events)
            .map_err(|e| CliError::Domain(format!("{}: replay failed: {e}", path.display())))
    } else {
        Ok(RegistryState::new(registry_config(ctx), initial_nodes(ctx)))
    }
}

pub fn register(
    ctx: &Ctx,
    file: &Path,
    fee: u64,
    height: u64,
    state: Option<&Path>,
) -> Result<(), CliError> {
    let field = ctx.field()?;
    let source = read_source(file)?;
    let path = state_path(ctx, state);
    let mut registry = load_state(ctx, &path)?;
    let record = registry
        .register_circuit(&source, fee, &field, height)
        .map_err(|e| CliError::Domain(format!("registration failed: {e}")))?;
    registry
        .save_events(&path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("circuit_id: {}", record.circuit_id.0.to_hex());
    println!("complexity: {}", record.complexity);
    println!("state: {}", path.display());
    Ok(())
}

pub fn get(ctx: &Ctx, id: &str, state: Option<&Path>) -> Result<(), CliError> {
    let hash = Hash256::from_hex(id)
        .ok_or_else(|| CliError::Usage(format!("'{id}' is not a 64-hex-digit circuit id")))?;
    let path = state_path(ctx, state);
    let registry = load_state(ctx, &path)?;
    let record = registry
        .get_circuit(&CircuitId(hash))
        .map_err(|e| CliError::Domain(e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(record)
            .map_err(|e| CliError::Domain(format!("cannot render record: {e}")))?
    );
    Ok(())
}
