//! Circuit registry subnetwork model: content-addressed circuit records,
//! registration with fee distribution, a simulated SMPC trusted-setup
//! ceremony, staking, and slashing.
//!
//! The registry is append-only: records are never removed or mutated. State
//! changes are logged as events and the log replays to an identical state,
//! which is also the persistence format (JSON lines).

use crate::circuit::{compile, parse_circuit, CircuitId, R1CS};
use crate::field::PrimeField;
use crate::hash::{sha256, Hash256};
use crate::protocol::CircuitInfo;
use crate::woo::{mock_setup, MockKeys, INTEGRITY_PARAM};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RegistryError {
    #[error("circuit failed to parse or compile: {0}")]
    CompileFailed(String),
    #[error("circuit does not use its integrity parameter in any constraint")]
    IntegrityParamUnused,
    #[error("registration fee {got} is below the minimum {min}")]
    FeeTooLow { min: u64, got: u64 },
    #[error("no active registry nodes")]
    NoActiveNodes,
    #[error("no node produced a valid setup contribution")]
    NoValidContributions,
    #[error("circuit not found")]
    NotFound,
    #[error("unknown node id")]
    UnknownNode,
    #[error("node is already inactive")]
    AlreadyInactive,
}

/// Harness control over how a node behaves during a setup ceremony.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeBehavior {
    Honest,
    /// Submits a contribution whose validity tag fails the check.
    InvalidShare,
    /// Submits nothing at all.
    Unresponsive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryNode {
    pub node_id: Vec<u8>,
    pub stake: u64,
    pub active: bool,
    pub behavior: NodeBehavior,
    /// Cumulative registration-fee income (kept separate from stake).
    pub fees_earned: u64,
}

impl RegistryNode {
    pub fn new(node_id: Vec<u8>, stake: u64) -> Self {
        RegistryNode { node_id, stake, active: true, behavior: NodeBehavior::Honest, fees_earned: 0 }
    }
}

/// Registered circuit with everything a client or verifier retrieves:
/// source, constraint system, keys, and complexity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitRecord {
    pub circuit_id: CircuitId,
    pub source: String,
    #[serde(with = "serde_r1cs")]
    pub r1cs: R1CS,
    pub keys: MockKeys,
    pub complexity: u64,
    pub registered_at: u64,
}

/// Embeds the R1CS using its canonical JSON schema (`modulus` as a decimal
/// string, sparse constraint rows) rather than a derived encoding.
mod serde_r1cs {
    use super::R1CS;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r1cs: &R1CS, s: S) -> Result<S::Ok, S::Error> {
        let value: serde_json::Value =
            serde_json::from_str(&r1cs.to_json()).map_err(serde::ser::Error::custom)?;
        value.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<R1CS, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        R1CS::from_json(&value.to_string()).map_err(serde::de::Error::custom)
    }
}

impl CircuitRecord {
    /// View consumed by block verification.
    pub fn circuit_info(&self) -> CircuitInfo {
        CircuitInfo { complexity: self.complexity, verifying_key: self.keys.verifying_key }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryConfig {
    pub min_stake: u64,
    /// Percentage of stake burned per slash.
    pub slash_percent: u64,
    pub min_registration_fee: u64,
}

impl Default for RegistryConfig {
    fn default() -> Self {
        RegistryConfig { min_stake: 100, slash_percent: 50, min_registration_fee: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlashReason {
    InvalidShare,
    MissedContribution,
    UnresponsiveQuery,
}

/// Append-only event log entry; one JSON object per line on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum RegistryEvent {
    Register { record: CircuitRecord },
    Slash { node_id: Vec<u8>, reason: SlashReason, new_stake: u64, deactivated: bool },
    FeeCredit { node_id: Vec<u8>, amount: u64, circuit_id: CircuitId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegistryState {
    pub config: RegistryConfig,
    pub records: BTreeMap<CircuitId, CircuitRecord>,
    pub nodes: Vec<RegistryNode>,
    pub ledger: Vec<RegistryEvent>,
}

/// Validity tag for an SMPC contribution: SHA-256("woo-smpc" ‖ contribution).
pub fn contribution_tag(contribution: &[u8; 32]) -> Hash256 {
    let mut buf = Vec::with_capacity(8 + 32);
    buf.extend_from_slice(b"woo-smpc");
    buf.extend_from_slice(contribution);
    sha256(&buf)
}

pub fn validate_contribution(contribution: &[u8; 32], proof_of_validity: &Hash256) -> bool {
    contribution_tag(contribution) == *proof_of_validity
}

impl RegistryState {
    pub fn new(config: RegistryConfig, nodes: Vec<RegistryNode>) -> Self {
        RegistryState { config, records: BTreeMap::new(), nodes, ledger: Vec::new() }
    }

    fn node_mut(&mut self, node_id: &[u8]) -> Option<&mut RegistryNode> {
        self.nodes.iter_mut().find(|n| n.node_id == node_id)
    }

    /// Parses, compiles, runs the setup ceremony across active nodes, stores
    /// the record, and distributes the fee among nodes that contributed
    /// validly. Misbehaving nodes are slashed as a side effect. Registering an
    /// already-known circuit returns the existing record and charges nothing.
    pub fn register_circuit(
        &mut self,
        source: &str,
        fee: u64,
        field: &PrimeField,
        height: u64,
    ) -> Result<CircuitRecord, RegistryError> {
        let circuit =
            parse_circuit(source).map_err(|e| RegistryError::CompileFailed(e.to_string()))?;
        let circuit_id = circuit.id();
        if let Some(existing) = self.records.get(&circuit_id) {
            return Ok(existing.clone());
        }
        if fee < self.config.min_registration_fee {
            return Err(RegistryError::FeeTooLow { min: self.config.min_registration_fee, got: fee });
        }
        if !self.nodes.iter().any(|n| n.active) {
            return Err(RegistryError::NoActiveNodes);
        }
        let compiled =
            compile(&circuit, field).map_err(|e| RegistryError::CompileFailed(e.to_string()))?;

        // A registrable circuit must bind the integrity parameter: it has to
        // be declared public and appear in at least one constraint.
        let integrity_var = compiled
            .public_names
            .iter()
            .position(|n| n == INTEGRITY_PARAM)
            .map(|i| i + 1) // var 0 is the constant ONE
            .ok_or(RegistryError::IntegrityParamUnused)?;
        if !compiled.r1cs.references_var(integrity_var) {
            return Err(RegistryError::IntegrityParamUnused);
        }

        // Simulated SMPC ceremony: each active node derives its contribution
        // deterministically from (node id, circuit id); honest nodes tag it
        // correctly, invalid-share nodes mis-tag, unresponsive nodes skip.
        let active: Vec<(Vec<u8>, NodeBehavior)> = self
            .nodes
            .iter()
            .filter(|n| n.active)
            .map(|n| (n.node_id.clone(), n.behavior))
            .collect();
        let mut valid: Vec<(Vec<u8>, [u8; 32])> = Vec::new();
        for (node_id, behavior) in &active {
            let mut buf = node_id.clone();
            buf.extend_from_slice(&circuit_id.0 .0);
            let contribution = sha256(&buf).0;
            match behavior {
                NodeBehavior::Honest => {
                    let tag = contribution_tag(&contribution);
                    debug_assert!(validate_contribution(&contribution, &tag));
                    valid.push((node_id.clone(), contribution));
                }
                NodeBehavior::InvalidShare => {
                    let bad_tag = sha256(&contribution);
                    assert!(!validate_contribution(&contribution, &bad_tag));
                    let _ = self.slash(node_id, SlashReason::InvalidShare);
                }
                NodeBehavior::Unresponsive => {
                    let _ = self.slash(node_id, SlashReason::MissedContribution);
                }
            }
        }
        if valid.is_empty() {
            return Err(RegistryError::NoValidContributions);
        }

        let contributions: Vec<[u8; 32]> = valid.iter().map(|(_, c)| *c).collect();
        let keys = mock_setup(circuit_id, &compiled.r1cs, &contributions)
            .map_err(|e| RegistryError::CompileFailed(e.to_string()))?;

        let record = CircuitRecord {
            circuit_id,
            source: circuit.canonical_source.clone(),
            r1cs: compiled.r1cs.clone(),
            keys,
            complexity: compiled.r1cs.constraint_count() as u64,
            registered_at: height,
        };
        self.records.insert(circuit_id, record.clone());
        self.ledger.push(RegistryEvent::Register { record: record.clone() });

        // Equal fee split across valid contributors; the integer remainder
        // goes to the first contributor by node-id order.
        let mut recipients: Vec<Vec<u8>> = valid.into_iter().map(|(id, _)| id).collect();
        recipients.sort();
        let share = fee / recipients.len() as u64;
        let remainder = fee % recipients.len() as u64;
        for (i, node_id) in recipients.iter().enumerate() {
            let amount = share + if i == 0 { remainder } else { 0 };
            if amount == 0 {
                continue;
            }
            self.node_mut(node_id).expect("contributor exists").fees_earned += amount;
            self.ledger.push(RegistryEvent::FeeCredit {
                node_id: node_id.clone(),
                amount,
                circuit_id,
            });
        }
        Ok(record)
    }

    pub fn get_circuit(&self, circuit_id: &CircuitId) -> Result<&CircuitRecord, RegistryError> {
        self.records.get(circuit_id).ok_or(RegistryError::NotFound)
    }

    /// Lookup closure for `verify_block`.
    pub fn lookup(&self) -> impl Fn(&CircuitId) -> Option<CircuitInfo> + '_ {
        move |id| self.records.get(id).map(|r| r.circuit_info())
    }

    /// Burns `slash_percent` of the node's stake; deactivates the node when
    /// its stake falls below `min_stake`.
    pub fn slash(&mut self, node_id: &[u8], reason: SlashReason) -> Result<(), RegistryError> {
        let min_stake = self.config.min_stake;
        let slash_percent = self.config.slash_percent;
        let node = self.node_mut(node_id).ok_or(RegistryError::UnknownNode)?;
        if !node.active {
            return Err(RegistryError::AlreadyInactive);
        }
        node.stake = node.stake * (100 - slash_percent) / 100;
        if node.stake < min_stake {
            node.active = false;
        }
        let event = RegistryEvent::Slash {
            node_id: node.node_id.clone(),
            reason,
            new_stake: node.stake,
            deactivated: !node.active,
        };
        self.ledger.push(event);
        Ok(())
    }

    /// Appends the event log to `path`, one JSON object per line.
    pub fn save_events(&self, path: &Path) -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        for event in &self.ledger {
            serde_json::to_writer(&mut file, event)?;
            file.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn load_events(path: &Path) -> std::io::Result<Vec<RegistryEvent>> {
        let file = std::fs::File::open(path)?;
        let mut events = Vec::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            events.push(serde_json::from_str(&line)?);
        }
        Ok(events)
    }

    /// Reconstructs a state by replaying an event log over the initial node
    /// set the log was produced from.
    pub fn replay(
        config: RegistryConfig,
        initial_nodes: Vec<RegistryNode>,
        events: Vec<RegistryEvent>,
    ) -> Result<RegistryState, RegistryError> {
        let mut state = RegistryState::new(config, initial_nodes);
        for event in events {
            match &event {
                RegistryEvent::Register { record } => {
                    state.records.insert(record.circuit_id, record.clone());
                }
                RegistryEvent::Slash { node_id, new_stake, deactivated, .. } => {
                    let node = state.node_mut(node_id).ok_or(RegistryError::UnknownNode)?;
                    node.stake = *new_stake;
                    node.active = !deactivated;
                }
                RegistryEvent::FeeCredit { node_id, amount, .. } => {
                    let node = state.node_mut(node_id).ok_or(RegistryError::UnknownNode)?;
                    node.fees_earned += amount;
                }
            }
            state.ledger.push(event);
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::FACTOR_EXAMPLE;

    fn nodes(n: usize) -> Vec<RegistryNode> {
        (0..n).map(|i| RegistryNode::new(vec![i as u8], 200)).collect()
    }

    fn field() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn register_splits_fee_equally() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(3));
        let record = state.register_circuit(FACTOR_EXAMPLE, 30, &field(), 1).unwrap();
        assert_eq!(record.complexity, record.r1cs.constraint_count() as u64);
        assert_eq!(record.registered_at, 1);
        for node in &state.nodes {
            assert_eq!(node.fees_earned, 10);
        }
        assert_eq!(state.get_circuit(&record.circuit_id).unwrap(), &record);
    }

    #[test]
    fn fee_remainder_goes_to_first_node_by_id() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(3));
        state.register_circuit(FACTOR_EXAMPLE, 32, &field(), 0).unwrap();
        let earned: Vec<u64> = state.nodes.iter().map(|n| n.fees_earned).collect();
        assert_eq!(earned, vec![12, 10, 10]);
        // Conservation: credits sum to the fee.
        assert_eq!(earned.iter().sum::<u64>(), 32);
    }

    #[test]
    fn duplicate_registration_is_idempotent_and_free() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(2));
        let a = state.register_circuit(FACTOR_EXAMPLE, 20, &field(), 3).unwrap();
        let earned_before: u64 = state.nodes.iter().map(|n| n.fees_earned).sum();
        let b = state.register_circuit(FACTOR_EXAMPLE, 20, &field(), 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(state.records.len(), 1);
        let earned_after: u64 = state.nodes.iter().map(|n| n.fees_earned).sum();
        assert_eq!(earned_before, earned_after);
    }

    #[test]
    fn rejects_low_fee_and_empty_subnetwork() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(1));
        assert_eq!(
            state.register_circuit(FACTOR_EXAMPLE, 5, &field(), 0),
            Err(RegistryError::FeeTooLow { min: 10, got: 5 })
        );
        let mut empty = RegistryState::new(RegistryConfig::default(), vec![]);
        assert_eq!(
            empty.register_circuit(FACTOR_EXAMPLE, 20, &field(), 0),
            Err(RegistryError::NoActiveNodes)
        );
    }

    #[test]
    fn rejects_circuit_without_integrity_usage() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(1));
        // No integrity parameter at all.
        let no_param = "def main(public field x) -> bool { assert(x == x); return true; }";
        assert_eq!(
            state.register_circuit(no_param, 20, &field(), 0),
            Err(RegistryError::IntegrityParamUnused)
        );
        // Declared but never constrained: `integrity` appears in no
        // constraint because x == x collapses to a tautology.
        let unused = "def main(public field x, public field integrity) -> bool { assert(x == x); return true; }";
        assert_eq!(
            state.register_circuit(unused, 20, &field(), 0),
            Err(RegistryError::IntegrityParamUnused)
        );
    }

    #[test]
    fn rejects_unparsable_source() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(1));
        assert!(matches!(
            state.register_circuit("def main( nonsense", 20, &field(), 0),
            Err(RegistryError::CompileFailed(_))
        ));
    }

    #[test]
    fn contribution_tag_round_trip() {
        let c = [7u8; 32];
        let tag = contribution_tag(&c);
        assert!(validate_contribution(&c, &tag));
        let mut bad = tag;
        bad.0[0] ^= 1;
        assert!(!validate_contribution(&c, &bad));
    }

    #[test]
    fn misbehaving_nodes_are_slashed_and_unpaid() {
        let mut ns = nodes(3);
        ns[1].behavior = NodeBehavior::InvalidShare;
        ns[2].behavior = NodeBehavior::Unresponsive;
        let mut state = RegistryState::new(RegistryConfig::default(), ns);
        state.register_circuit(FACTOR_EXAMPLE, 30, &field(), 0).unwrap();
        assert_eq!(state.nodes[0].fees_earned, 30);
        assert_eq!(state.nodes[0].stake, 200);
        // both misbehaving nodes slashed 50%: 200 -> 100, still >= min_stake
        for i in [1, 2] {
            assert_eq!(state.nodes[i].stake, 100);
            assert!(state.nodes[i].active);
            assert_eq!(state.nodes[i].fees_earned, 0);
        }
    }

    #[test]
    fn setup_seed_depends_on_contributor_set() {
        let mut honest = RegistryState::new(RegistryConfig::default(), nodes(3));
        let a = honest.register_circuit(FACTOR_EXAMPLE, 30, &field(), 0).unwrap();
        let mut ns = nodes(3);
        ns[2].behavior = NodeBehavior::Unresponsive;
        let mut degraded = RegistryState::new(RegistryConfig::default(), ns);
        let b = degraded.register_circuit(FACTOR_EXAMPLE, 30, &field(), 0).unwrap();
        assert_ne!(a.keys.proving_key.setup_seed, b.keys.proving_key.setup_seed);
    }

    #[test]
    fn all_nodes_misbehaving_fails_setup() {
        let mut ns = nodes(2);
        ns[0].behavior = NodeBehavior::InvalidShare;
        ns[1].behavior = NodeBehavior::Unresponsive;
        let mut state = RegistryState::new(RegistryConfig::default(), ns);
        assert_eq!(
            state.register_circuit(FACTOR_EXAMPLE, 30, &field(), 0),
            Err(RegistryError::NoValidContributions)
        );
    }

    #[test]
    fn slash_thresholds() {
        let config = RegistryConfig { min_stake: 30, slash_percent: 50, min_registration_fee: 10 };
        let mut state = RegistryState::new(config, vec![RegistryNode::new(vec![1], 100)]);
        state.slash(&[1], SlashReason::UnresponsiveQuery).unwrap();
        assert_eq!(state.nodes[0].stake, 50);
        assert!(state.nodes[0].active);
        state.slash(&[1], SlashReason::UnresponsiveQuery).unwrap();
        assert_eq!(state.nodes[0].stake, 25);
        assert!(!state.nodes[0].active);
        assert_eq!(
            state.slash(&[1], SlashReason::UnresponsiveQuery),
            Err(RegistryError::AlreadyInactive)
        );
        assert_eq!(state.slash(&[9], SlashReason::InvalidShare), Err(RegistryError::UnknownNode));
    }

    #[test]
    fn event_log_replays_to_identical_state() {
        let mut ns = nodes(3);
        ns[1].behavior = NodeBehavior::InvalidShare;
        let mut state = RegistryState::new(RegistryConfig::default(), ns.clone());
        state.register_circuit(FACTOR_EXAMPLE, 31, &field(), 5).unwrap();
        state.slash(&[0], SlashReason::UnresponsiveQuery).unwrap();

        // fees_earned/stake/active are event-derived; reset the initial node
        // set to its pre-log condition for replay.
        let replayed =
            RegistryState::replay(state.config, ns, state.ledger.clone()).unwrap();
        assert_eq!(replayed, state);
    }

    #[test]
    fn persistence_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("registry.jsonl");
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(2));
        let record = state.register_circuit(FACTOR_EXAMPLE, 20, &field(), 7).unwrap();
        state.save_events(&path).unwrap();

        let events = RegistryState::load_events(&path).unwrap();
        let replayed = RegistryState::replay(state.config, nodes(2), events).unwrap();
        assert_eq!(replayed, state);
        let loaded = replayed.get_circuit(&record.circuit_id).unwrap();
        assert_eq!(loaded, &record);
        // R1CS survives the JSON-lines embedding bit-exactly.
        assert_eq!(loaded.r1cs.digest(), record.r1cs.digest());
    }

    #[test]
    fn lookup_feeds_verification() {
        let mut state = RegistryState::new(RegistryConfig::default(), nodes(1));
        let record = state.register_circuit(FACTOR_EXAMPLE, 20, &field(), 0).unwrap();
        let info = state.lookup()(&record.circuit_id).unwrap();
        assert_eq!(info.complexity, record.complexity);
        assert!(state.lookup()(&CircuitId(Hash256::ZERO)).is_none());
    }
}
