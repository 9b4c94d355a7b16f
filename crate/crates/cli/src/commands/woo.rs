//! `pouw woo` — the witness-obfuscated outsourcing workflow as file-chained
//! stages: mask sampling, circuit transformation, proving over masked
//! inputs, and verification of the resulting artifact.

use super::{load_circuit, read_json, resolve_inputs, stem, write_json, Ctx};
use crate::CliError;
use pouw_core::circuit::generate_witness;
use pouw_core::hash::sha256;
use pouw_core::woo::{
    mask_inputs, mock_prove, mock_setup, mock_verify, sample_masks, transform_circuit,
    MaskVector, MockKey, MockProof, TransformedCircuit,
};
use pouw_core::{FieldElement, PrimeField};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Self-contained proof artifact: everything a verifier needs.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProofArtifact {
    pub modulus: u64,
    pub verifying_key: MockKey,
    pub proof: MockProof,
    pub public_inputs: Vec<FieldElement>,
}

pub fn mask(ctx: &Ctx, file: &Path) -> Result<(), CliError> {
    let field = ctx.field()?;
    let (circuit, _) = load_circuit(file, &field)?;
    let masks = sample_masks(&circuit, sha256(&ctx.seed.to_be_bytes()), &field);
    let out = ctx.out_path(&format!("{}.masks.json", stem(file)));
    write_json(&out, &masks)?;
    println!("input masks: {}", masks.r_in.len());
    println!("output masks: {}", masks.r_out.len());
    println!("wrote {}", out.display());
    Ok(())
}

fn transformed(
    file: &Path,
    masks_path: &Path,
    field: &PrimeField,
) -> Result<(pouw_core::Circuit, pouw_core::circuit::CompiledCircuit, TransformedCircuit), CliError>
{
    let (circuit, compiled) = load_circuit(file, field)?;
    let masks: MaskVector = read_json(masks_path)?;
    let t = transform_circuit(&circuit, &masks, field)
        .map_err(|e| CliError::Domain(format!("transform failed: {e}")))?;
    Ok((circuit, compiled, t))
}

pub fn transform(ctx: &Ctx, file: &Path, masks_path: &Path) -> Result<(), CliError> {
    let field = ctx.field()?;
    let (_, compiled, t) = transformed(file, masks_path, &field)?;
    let out = ctx.out_path(&format!("{}.woo.zk", stem(file)));
    std::fs::write(&out, t.circuit.to_source())
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))?;
    let base = compiled.r1cs.constraint_count();
    let total = t.compiled.r1cs.constraint_count();
    println!("base constraints: {base}");
    println!("transformed constraints: {total} (delta {})", total - base);
    println!("wrote {}", out.display());
    Ok(())
}

pub fn prove(
    ctx: &Ctx,
    file: &Path,
    masks_path: &Path,
    public: &str,
    private: &str,
    eta: u64,
) -> Result<(), CliError> {
    let field = ctx.field()?;
    let (_, base_compiled, t) = transformed(file, masks_path, &field)?;
    let base_public = resolve_inputs(&base_compiled.public_names, public, &field, "public")?;
    let base_private = resolve_inputs(&base_compiled.private_names, private, &field, "private")?;
    let base_witness = generate_witness(&base_compiled, &base_public, &base_private)
        .map_err(|e| CliError::Domain(format!("witness generation failed: {e}")))?;

    let masked = mask_inputs(&base_private, &t.masks)
        .map_err(|e| CliError::Domain(format!("masking failed: {e}")))?;
    let publics = t.public_inputs(&base_public, &base_witness, &base_compiled, field.element(eta));
    let witness = generate_witness(&t.compiled, &publics, &masked)
        .map_err(|e| CliError::Domain(format!("transformed witness failed: {e}")))?;

    let contribution = *sha256(&ctx.seed.to_le_bytes()).as_bytes();
    let keys = mock_setup(t.circuit.id(), &t.compiled.r1cs, &[contribution])
        .map_err(|e| CliError::Domain(format!("setup failed: {e}")))?;
    let proof = mock_prove(&keys.proving_key, &t.compiled.r1cs, &witness, &publics)
        .map_err(|e| CliError::Domain(format!("proving failed: {e}")))?;

    let artifact = ProofArtifact {
        modulus: field.modulus(),
        verifying_key: keys.verifying_key,
        proof,
        public_inputs: publics,
    };
    let out = ctx.out_path(&format!("{}.proof.json", stem(file)));
    write_json(&out, &artifact)?;
    println!("constraints proven: {}", t.compiled.r1cs.constraint_count());
    println!("wrote {}", out.display());
    Ok(())
}

pub fn verify(_ctx: &Ctx, proof_path: &Path) -> Result<(), CliError> {
    let artifact: ProofArtifact = read_json(proof_path)?;
    let field = PrimeField::new(artifact.modulus)
        .map_err(|e| CliError::Domain(format!("artifact field invalid: {e}")))?;
    if mock_verify(&artifact.verifying_key, &artifact.proof, &field, &artifact.public_inputs) {
        println!("ok");
        Ok(())
    } else {
        println!("fail");
        Err(CliError::Domain("proof verification failed".into()))
    }
}
