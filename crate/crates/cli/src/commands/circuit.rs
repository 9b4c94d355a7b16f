//! `pouw circuit` — compile circuits to R1CS and check satisfaction.

use super::{load_circuit, resolve_inputs, stem, Ctx};
use crate::CliError;
use pouw_core::circuit::generate_witness;
use std::path::Path;

pub fn compile(ctx: &Ctx, file: &Path) -> Result<(), CliError> {
    let field = ctx.field()?;
    let (circuit, compiled) = load_circuit(file, &field)?;
    let out = ctx.out_path(&format!("{}.r1cs.json", stem(file)));
    std::fs::write(&out, compiled.r1cs.to_json())
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))?;
    println!("circuit_id: {}", circuit.id().0.to_hex());
    println!("constraints: {}", compiled.r1cs.constraint_count());
    println!("wrote {}", out.display());
    Ok(())
}

pub fn check(ctx: &Ctx, file: &Path, public: &str, private: &str) -> Result<(), CliError> {
    let field = ctx.field()?;
    let (_, compiled) = load_circuit(file, &field)?;
    let public_inputs = resolve_inputs(&compiled.public_names, public, &field, "public")?;
    let private_inputs = resolve_inputs(&compiled.private_names, private, &field, "private")?;
    match generate_witness(&compiled, &public_inputs, &private_inputs) {
        Ok(witness) => {
            let ok = compiled
                .r1cs
                .check_satisfaction(&witness)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if ok {
                println!("satisfied ({} constraints)", compiled.r1cs.constraint_count());
                Ok(())
            } else {
                println!("unsatisfied");
                Err(CliError::Domain("witness does not satisfy the constraints".into()))
            }
        }
        Err(e) => {
            println!("unsatisfied");
            Err(CliError::Domain(e.to_string()))
        }
    }
}
