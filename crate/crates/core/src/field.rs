//! Prime-field arithmetic over word-sized moduli.
//!
//! All consensus-level values (witness entries, masks, the reduced integrity
//! parameter) live in a single prime field. The default modulus is the
//! Mersenne prime 2^61 - 1, which keeps products inside `u128`, but any prime
//! above 2^16 works; tests typically use tiny fields like p = 11.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default modulus: the Mersenne prime 2^61 - 1.
pub const DEFAULT_MODULUS: u64 = (1u64 << 61) - 1;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small (must exceed 2^16)")]
    ModulusTooSmall(u64),
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(u64, u64),
}

/// A prime field 𝔽_p for a word-sized prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { modulus: DEFAULT_MODULUS }
    }
}

impl PrimeField {
    /// Builds a field, checking primality with deterministic Miller-Rabin.
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if modulus <= (1 << 16) {
            return Err(FieldError::ModulusTooSmall(modulus));
        }
        if !is_prime_u64(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    /// Test-friendly constructor that skips the size floor but not primality.
    pub fn new_unchecked_size(modulus: u64) -> Result<Self, FieldError> {
        if !is_prime_u64(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Embeds an arbitrary integer, reducing mod p.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement { value: value % self.modulus, modulus: self.modulus }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Reduces a big-endian byte string mod p (used for the integrity
    /// parameter η when it is injected as a circuit input).
    pub fn element_from_bytes_be(&self, bytes: &[u8]) -> FieldElement {
        let mut acc: u128 = 0;
        for &b in bytes {
            acc = ((acc << 8) | b as u128) % self.modulus as u128;
        }
        self.element(acc as u64)
    }
}

/// A value in [0, p), tagged with its modulus so cross-field mixups are
/// caught at runtime instead of silently producing garbage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { modulus: self.modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.modulus, other.modulus))
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        let sum = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Ok(FieldElement { value: sum as u64, modulus: self.modulus })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        let diff =
            (self.value as u128 + self.modulus as u128 - other.value as u128) % self.modulus as u128;
        Ok(FieldElement { value: diff as u64, modulus: self.modulus })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        let prod = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Ok(FieldElement { value: prod as u64, modulus: self.modulus })
    }

    pub fn neg(&self) -> FieldElement {
        if self.value == 0 {
            *self
        } else {
            FieldElement { value: self.modulus - self.value, modulus: self.modulus }
        }
    }

    /// Multiplicative inverse via Fermat: a^(p-2) mod p.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::InversionOfZero);
        }
        Ok(FieldElement {
            value: pow_mod(self.value, self.modulus - 2, self.modulus),
            modulus: self.modulus,
        })
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin: the witness set below is complete for all
/// n < 2^64 (Sinclair's bound).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
