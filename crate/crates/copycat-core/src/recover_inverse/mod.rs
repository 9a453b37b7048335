//! Single-trace recovery of the unknown operand of a modular inversion with
//! known modulus, plus the nonce-to-key finishing steps.
//!
//! The recovery steps through the trace and mirrors the victim's execution,
//! keeping every internal value as an exact linear form in the unknown
//! operand. Parity outcomes recorded in the trace (halvings, adjust flags,
//! and the implicit loop boundaries) each constrain one low bit of the
//! operand; comparison and sign outcomes are consumed as given and never
//! inferred. A mismatch between a determinable parity and the trace aborts
//! with the offending event index.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::{mod_floor_uint, mod_inverse};
use crate::schemes::SignatureSample;
use crate::victims::{algx_modinv, beea_compact, beea_full, BranchEvent, BranchTrace, Variant};

mod form;
mod replay;

pub use form::{BitSolver, Form};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecoverError {
    /// A determinable parity disagreed with the trace.
    InconsistentTrace { event: usize },
    /// Event outside the variant's alphabet.
    ForeignEvent { event: usize, kind: BranchEvent },
    /// No replay engine for this victim.
    UnsupportedVariant(Variant),
    /// Trace was expected to be of `expected`.
    VariantMismatch { expected: Variant, got: Variant },
    /// r (or another required value) is not invertible.
    NotInvertible,
    /// The blinding attack needs at least one inversion trace.
    MissingTrace,
}

impl fmt::Display for RecoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoverError::InconsistentTrace { event } => {
                write!(f, "trace inconsistent at event {event}")
            }
            RecoverError::ForeignEvent { event, kind } => {
                write!(f, "event {kind} at index {event} does not belong to this victim")
            }
            RecoverError::UnsupportedVariant(v) => {
                write!(f, "no operand-recovery engine for variant {v}")
            }
            RecoverError::VariantMismatch { expected, got } => {
                write!(f, "expected a {expected} trace, got {got}")
            }
            RecoverError::NotInvertible => write!(f, "required value is not invertible"),
            RecoverError::MissingTrace => write!(f, "no inversion trace supplied"),
        }
    }
}

impl std::error::Error for RecoverError {}

/// Result of an operand recovery: the full operand when the trace pinned
/// every bit below the modulus width, or the resolved low bits otherwise
/// (truncated traces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperandRecovery {
    Full { operand: BigUint },
    Partial { bits_resolved: u64, low_bits: BigUint },
}

impl OperandRecovery {
    pub fn operand(&self) -> Option<&BigUint> {
        match self {
            OperandRecovery::Full { operand } => Some(operand),
            OperandRecovery::Partial { .. } => None,
        }
    }
}

/// Instrumentation counters from one recovery.
#[derive(Debug, Clone)]
pub struct RecoveryStats {
    /// Halving events consumed.
    pub halvings: u64,
    /// (halvings, bits resolved) after each consumed event.
    pub trajectory: Vec<(u64, u64)>,
}

/// Recover the unknown operand `u` of `variant(u, modulus)` from a complete
/// or truncated trace. On full recovery the operand is re-executed through
/// the victim and the reproduced trace must match event for event.
pub fn recover_unknown_operand(
    trace: &BranchTrace,
    modulus: &BigUint,
    variant: Variant,
) -> Result<OperandRecovery, RecoverError> {
    recover_unknown_operand_with_stats(trace, modulus, variant).map(|(r, _)| r)
}

pub fn recover_unknown_operand_with_stats(
    trace: &BranchTrace,
    modulus: &BigUint,
    variant: Variant,
) -> Result<(OperandRecovery, RecoveryStats), RecoverError> {
    if trace.variant != variant {
        return Err(RecoverError::VariantMismatch { expected: variant, got: trace.variant });
    }
    let replay = replay::replay_trace(trace, modulus)?;
    let solver = replay.solver;
    let stats = RecoveryStats { halvings: solver.halvings, trajectory: solver.trajectory.clone() };

    if solver.resolved < modulus.bits() {
        return Ok((
            OperandRecovery::Partial {
                bits_resolved: solver.resolved,
                low_bits: solver.low.clone(),
            },
            stats,
        ));
    }
    let operand = solver.low.clone();
    if operand.is_zero() || operand >= *modulus {
        return Err(RecoverError::InconsistentTrace { event: trace.len().saturating_sub(1) });
    }
    // Soundness: the recovered operand must reproduce the trace exactly.
    let reproduced = match variant {
        Variant::CompactBeea => beea_compact(&operand, modulus).map(|(_, t)| t),
        Variant::FullBeea => beea_full(&operand, modulus).map(|(_, t)| t),
        Variant::AlgX => algx_modinv(&operand, modulus).map(|(_, t)| t),
        other => return Err(RecoverError::UnsupportedVariant(other)),
    };
    match reproduced {
        Ok(t) if t.events == trace.events => Ok((OperandRecovery::Full { operand }, stats)),
        _ => Err(RecoverError::InconsistentTrace { event: trace.len().saturating_sub(1) }),
    }
}

/// x = r^-1 (s k - h) mod n.
pub fn dsa_key_from_nonce(
    sample: &SignatureSample,
    k: &BigUint,
    n: &BigUint,
) -> Result<BigUint, RecoverError> {
    let rinv = mod_inverse(&sample.r, n).ok_or(RecoverError::NotInvertible)?;
    let sk_minus_h = BigInt::from(&sample.s * k) - BigInt::from(sample.h.clone());
    Ok((rinv * mod_floor_uint(&sk_minus_h, n)) % n)
}

/// x = r^-1 (h - s k) mod (p - 1).
pub fn elgamal_key_from_nonce(
    sample: &SignatureSample,
    k: &BigUint,
    p: &BigUint,
) -> Result<BigUint, RecoverError> {
    let p1 = p - 1u32;
    let rinv = mod_inverse(&sample.r, &p1).ok_or(RecoverError::NotInvertible)?;
    let h_minus_sk = BigInt::from(sample.h.clone()) - BigInt::from(&sample.s * k);
    Ok((rinv * mod_floor_uint(&h_minus_sk, &p1)) % &p1)
}

/// Key recovery against the blinded signing path.
///
/// With the nonce inversion unblinded, its trace alone recovers `k` and the
/// key falls to [`dsa_key_from_nonce`]-style algebra. When the inversion
/// input is masked as `k*b`, the mask is only as strong as its own
/// inversion: the `b^-1` trace recovers `b`, unmasking `k = (k b) b^-1`.
///
/// `sample.s` must be the final (unblinded) signature half.
pub fn ecdsa_blinding_attack(
    kinv_trace: Option<&BranchTrace>,
    binv_trace: Option<&BranchTrace>,
    sample: &SignatureSample,
    n: &BigUint,
) -> Result<BigUint, RecoverError> {
    let recover_full = |trace: &BranchTrace| -> Result<BigUint, RecoverError> {
        match recover_unknown_operand(trace, n, trace.variant)? {
            OperandRecovery::Full { operand } => Ok(operand),
            OperandRecovery::Partial { .. } => Err(RecoverError::InconsistentTrace {
                event: trace.len().saturating_sub(1),
            }),
        }
    };
    let k = match (kinv_trace, binv_trace) {
        (Some(kt), None) => recover_full(kt)?,
        (Some(kbt), Some(bt)) => {
            let kb = recover_full(kbt)?;
            let b = recover_full(bt)?;
            let binv = mod_inverse(&b, n).ok_or(RecoverError::NotInvertible)?;
            (kb * binv) % n
        }
        (None, _) => return Err(RecoverError::MissingTrace),
    };
    dsa_key_from_nonce(sample, &k, n)
}
