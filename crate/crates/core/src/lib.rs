//! Protocol kit and deterministic simulator for a proof-of-useful-work
//! consensus in which miners generate SNARK-style proofs for client-submitted
//! arithmetic circuits.
//!
//! The proof system here is an explicitly **non-sound mock**: proofs are
//! commitment objects with the size and cost profile of a real SNARK, not
//! cryptographic arguments. Verification requires prover honesty. The module
//! boundary admits a real backend later; everything the consensus layer
//! exercises (binding, freshness, linear proving cost, constant verify cost)
//! is preserved by the mock.

pub mod circuit;
pub mod field;
pub mod hash;
pub mod protocol;
pub mod registry;
pub mod simulator;
pub mod woo;

pub use circuit::{Circuit, CircuitId, Witness, R1CS};
pub use field::{FieldElement, PrimeField};
pub use hash::Hash256;
