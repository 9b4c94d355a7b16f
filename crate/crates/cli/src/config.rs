//! Application configuration: a TOML file with a `[sim]` section mirroring
//! the simulator config, a `[registry]` section for subnetwork constants, and
//! top-level field/output settings. Unknown keys are rejected so typos fail
//! loudly instead of silently falling back to defaults.

use pouw_core::simulator::{MinerSpec, SimConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_MODULUS: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RegistrySettings {
    pub min_stake: u64,
    pub slash_percent: u64,
    pub min_registration_fee: u64,
    /// Proof-transaction fee per constraint.
    pub fee_rate: u64,
    /// Number of simulated subnetwork nodes.
    pub nodes: u64,
    /// Initial stake per node.
    pub node_stake: u64,
}

impl Default for RegistrySettings {
    fn default() -> Self {
        RegistrySettings {
            min_stake: 100,
            slash_percent: 50,
            min_registration_fee: 10,
            fee_rate: 1,
            nodes: 3,
            node_stake: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AppConfig {
    pub modulus: u64,
    pub out_dir: String,
    pub registry: RegistrySettings,
    pub sim: SimConfig,
}

impl Default for AppConfig {
    fn default() -> Self {
        let mut sim = SimConfig::baseline(
            vec![MinerSpec::uniform("m0", 1.0), MinerSpec::uniform("m1", 1.0)],
            10_000,
            42,
        );
        // The baseline disables retargeting with u64::MAX, which TOML cannot
        // represent (integers are i64); use an equally unreachable window.
        sim.retarget_window = 1_000_000_000;
        AppConfig { modulus: DEFAULT_MODULUS, out_dir: "./out".into(), registry: RegistrySettings::default(), sim }
    }
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn field(&self) -> Result<pouw_core::PrimeField, String> {
        pouw_core::PrimeField::new(self.modulus).map_err(|e| format!("invalid modulus: {e}"))
    }
}
