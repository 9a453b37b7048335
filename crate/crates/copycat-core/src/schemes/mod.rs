//! Key generation and signing for RSA (with CRT parameters), DSA, ECDSA and
//! ElGamal. This module produces the ground-truth secrets and signature
//! corpora every attack is evaluated against; it makes no constant-time
//! claims of any kind.
//!
//! All operations are deterministic given the caller-supplied RNG. Nonces
//! are retained in [`SignatureSample`] so fixtures can be checked against
//! recovered values.

use std::fmt;

use num_bigint::BigUint;

mod dsa;
mod ecdsa;
mod elgamal;
pub mod fixtures;
mod rsa;

pub use dsa::{dsa_keygen, dsa_sign, DsaKey};
pub use ecdsa::{
    ecdsa_keygen, ecdsa_sign, ecdsa_sign_blinded, ecdsa_verify, BlindedSignature, Curve,
    CurvePreset, EcdsaKey, Point,
};
pub use elgamal::{elgamal_keygen, elgamal_sign, ElGamalKey};
pub use rsa::{rsa_keygen, RsaKey};

/// Trusted modular-inverse oracle: `a^-1 mod m` in `[1, m-1]`.
pub fn modinv_ref(a: &BigUint, m: &BigUint) -> Result<BigUint, SchemeError> {
    crate::arith::mod_inverse(a, m).ok_or(SchemeError::NoInverse)
}

/// One signature with its public inputs. `k` is the ephemeral nonce, kept
/// only in ground-truth fixtures; `z` is the observed count of leading zero
/// bits of `k`, filled in by the channel when available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureSample {
    pub r: BigUint,
    pub s: BigUint,
    pub h: BigUint,
    pub k: Option<BigUint>,
    pub z: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeError {
    /// Unsatisfiable generation parameters.
    InvalidParameter(String),
    /// Requested inverse does not exist.
    NoInverse,
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            SchemeError::NoInverse => write!(f, "no modular inverse exists"),
        }
    }
}

impl std::error::Error for SchemeError {}
