//! Command implementations plus small shared helpers for artifact IO and
//! input parsing.

pub mod circuit;
pub mod experiment;
pub mod registry;
pub mod sim;
pub mod woo;

use crate::config::AppConfig;
use crate::CliError;
use pouw_core::circuit::{compile, parse_circuit, Circuit, CompiledCircuit};
use pouw_core::{FieldElement, PrimeField};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};

pub struct Ctx {
    pub out: PathBuf,
    pub seed: u64,
    pub app: AppConfig,
}

impl Ctx {
    pub fn ensure_out(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| {
            CliError::Usage(format!("cannot create output directory {}: {e}", self.out.display()))
        })
    }

    pub fn field(&self) -> Result<PrimeField, CliError> {
        self.app.field().map_err(CliError::Usage)
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

pub fn read_source(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses and compiles a circuit file, mapping failures to domain errors.
pub fn load_circuit(path: &Path, field: &PrimeField) -> Result<(Circuit, CompiledCircuit), CliError> {
    let source = read_source(path)?;
    let circuit = parse_circuit(&source)
        .map_err(|e| CliError::Domain(format!("{}: parse error: {e}", path.display())))?;
    let compiled = compile(&circuit, field)
        .map_err(|e| CliError::Domain(format!("{}: compile error: {e}", path.display())))?;
    Ok((circuit, compiled))
}

/// Parses "name=value,name=value" into pairs; the empty string yields none.
pub fn parse_assignments(s: &str) -> Result<Vec<(String, u64)>, CliError> {
    let mut pairs = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, got '{part}'")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("'{part}' has a non-integer value")))?;
        pairs.push((name.trim().to_string(), value));
    }
    Ok(pairs)
}

/// Matches named assignments against a circuit's declared parameter list,
/// producing field elements in declaration order.
pub fn resolve_inputs(
    names: &[String],
    spec: &str,
    field: &PrimeField,
    kind: &str,
) -> Result<Vec<FieldElement>, CliError> {
    let pairs = parse_assignments(spec)?;
    for (name, _) in &pairs {
        if !names.contains(name) {
            return Err(CliError::Usage(format!("unknown {kind} input '{name}'")));
        }
    }
    names
        .iter()
        .map(|name| {
            pairs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| field.element(*v))
                .ok_or_else(|| CliError::Usage(format!("missing {kind} input '{name}'")))
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot serialize {}: {e}", path.display())))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_source(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(format!("{}: invalid artifact: {e}", path.display())))
}

/// Writes rows as an RFC 4180 CSV with a header derived from the row type.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    for row in rows {
        wtr.serialize(row)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    wtr.flush()
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// File stem used to name derived artifacts.
pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "circuit".into())
}
