//! Instrumented implementations of the algorithms under attack.
//!
//! Each victim is a clean-room implementation of the published pseudocode of
//! a leaky routine. Running a victim yields the mathematical result plus a
//! [`BranchTrace`]: the ordered sequence of secret-dependent branch outcomes
//! the execution took. The trace is the ground truth that the simulated
//! channel lowers to instruction counts and that the recovery engines
//! consume.

use std::fmt;

use num_bigint::BigUint;

mod algx;
mod beea;
mod ecc;
mod gcd;

pub use algx::{algx_modinv, algx_modinv_observed, AlgxState};
pub use beea::{beea_compact, beea_full};
pub use ecc::ecc_mulmod_steps;
pub use gcd::{euclid_gcd, openssl_bgcd};

/// Victim identifier, also used in trace file headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Straightforward binary extended Euclidean inversion (all four
    /// accumulators), any modulus.
    FullBeea,
    /// Compact binary inversion specialized to odd moduli.
    CompactBeea,
    /// Knuth-style binary inversion with the (t1, t2, t3) working vector.
    AlgX,
    /// Binary GCD with four parity cases and a swap after each reduction.
    OpensslGcd,
    /// Textbook Euclidean GCD; leaks only the division chain length.
    EuclidGcd,
    /// Always-add-and-double scalar multiplication with dummy leading steps.
    EccMulmod,
}

impl Variant {
    pub fn id(self) -> &'static str {
        match self {
            Variant::FullBeea => "full-beea",
            Variant::CompactBeea => "compact-beea",
            Variant::AlgX => "algx",
            Variant::OpensslGcd => "openssl-gcd",
            Variant::EuclidGcd => "euclid-gcd",
            Variant::EccMulmod => "ecc-mulmod",
        }
    }

    pub fn from_id(id: &str) -> Option<Variant> {
        Some(match id {
            "full-beea" => Variant::FullBeea,
            "compact-beea" => Variant::CompactBeea,
            "algx" => Variant::AlgX,
            "openssl-gcd" => Variant::OpensslGcd,
            "euclid-gcd" => Variant::EuclidGcd,
            "ecc-mulmod" => Variant::EccMulmod,
            _ => return None,
        })
    }

    /// Event kinds this variant may emit. The two BEEA layouts share one
    /// alphabet; every other variant has its own.
    pub fn alphabet(self) -> &'static [BranchEvent] {
        use BranchEvent::*;
        match self {
            Variant::FullBeea | Variant::CompactBeea => &[
                UHalvePlain,
                UHalveAdjust,
                VHalvePlain,
                VHalveAdjust,
                CmpS1,
                CmpS2,
            ],
            Variant::AlgX => &[
                InitUOdd,
                InitUEven,
                T3HalvePlain,
                T3HalveAdjust,
                T3Pos,
                T3Neg,
                T1NegAdjust,
                T1Nonneg,
            ],
            Variant::OpensslGcd => &[GcdOo, GcdOe, GcdEo, GcdEe, GcdSwap, GcdNoswap],
            Variant::EuclidGcd => &[DivStep],
            Variant::EccMulmod => &[DummyStep, RealStep],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A single secret-dependent branch outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchEvent {
    UHalvePlain,
    UHalveAdjust,
    VHalvePlain,
    VHalveAdjust,
    CmpS1,
    CmpS2,
    T3HalvePlain,
    T3HalveAdjust,
    T3Pos,
    T3Neg,
    T1NegAdjust,
    T1Nonneg,
    InitUOdd,
    InitUEven,
    GcdOo,
    GcdOe,
    GcdEo,
    GcdEe,
    GcdSwap,
    GcdNoswap,
    DivStep,
    DummyStep,
    RealStep,
}

impl BranchEvent {
    pub fn name(self) -> &'static str {
        use BranchEvent::*;
        match self {
            UHalvePlain => "U_HALVE_PLAIN",
            UHalveAdjust => "U_HALVE_ADJUST",
            VHalvePlain => "V_HALVE_PLAIN",
            VHalveAdjust => "V_HALVE_ADJUST",
            CmpS1 => "CMP_S1",
            CmpS2 => "CMP_S2",
            T3HalvePlain => "T3_HALVE_PLAIN",
            T3HalveAdjust => "T3_HALVE_ADJUST",
            T3Pos => "T3_POS",
            T3Neg => "T3_NEG",
            T1NegAdjust => "T1_NEG_ADJUST",
            T1Nonneg => "T1_NONNEG",
            InitUOdd => "INIT_U_ODD",
            InitUEven => "INIT_U_EVEN",
            GcdOo => "GCD_OO",
            GcdOe => "GCD_OE",
            GcdEo => "GCD_EO",
            GcdEe => "GCD_EE",
            GcdSwap => "GCD_SWAP",
            GcdNoswap => "GCD_NOSWAP",
            DivStep => "DIV_STEP",
            DummyStep => "DUMMY_STEP",
            RealStep => "REAL_STEP",
        }
    }

    pub fn from_name(name: &str) -> Option<BranchEvent> {
        use BranchEvent::*;
        Some(match name {
            "U_HALVE_PLAIN" => UHalvePlain,
            "U_HALVE_ADJUST" => UHalveAdjust,
            "V_HALVE_PLAIN" => VHalvePlain,
            "V_HALVE_ADJUST" => VHalveAdjust,
            "CMP_S1" => CmpS1,
            "CMP_S2" => CmpS2,
            "T3_HALVE_PLAIN" => T3HalvePlain,
            "T3_HALVE_ADJUST" => T3HalveAdjust,
            "T3_POS" => T3Pos,
            "T3_NEG" => T3Neg,
            "T1_NEG_ADJUST" => T1NegAdjust,
            "T1_NONNEG" => T1Nonneg,
            "INIT_U_ODD" => InitUOdd,
            "INIT_U_EVEN" => InitUEven,
            "GCD_OO" => GcdOo,
            "GCD_OE" => GcdOe,
            "GCD_EO" => GcdEo,
            "GCD_EE" => GcdEe,
            "GCD_SWAP" => GcdSwap,
            "GCD_NOSWAP" => GcdNoswap,
            "DIV_STEP" => DivStep,
            "DUMMY_STEP" => DummyStep,
            "REAL_STEP" => RealStep,
            _ => return None,
        })
    }
}

impl fmt::Display for BranchEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ground-truth sequence of branch outcomes from one victim execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTrace {
    pub variant: Variant,
    pub events: Vec<BranchEvent>,
}

impl BranchTrace {
    pub fn new(variant: Variant) -> Self {
        BranchTrace { variant, events: Vec::new() }
    }

    pub fn push(&mut self, ev: BranchEvent) {
        debug_assert!(self.variant.alphabet().contains(&ev), "{ev} outside {}", self.variant);
        self.events.push(ev);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Rejects events outside the variant's alphabet.
    pub fn check_alphabet(&self) -> Result<(), VictimError> {
        let alpha = self.variant.alphabet();
        for (i, ev) in self.events.iter().enumerate() {
            if !alpha.contains(ev) {
                return Err(VictimError::ForeignEvent { index: i, event: *ev });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VictimError {
    /// The compact inversion only supports odd moduli.
    EvenModulus,
    /// Inversion requested for operands with gcd != 1.
    NotCoprime(BigUint),
    /// Operand must be positive.
    ZeroInput,
    /// Scalar outside (0, 2^order_bits).
    ScalarOutOfRange,
    /// Trace contains an event outside the variant alphabet.
    ForeignEvent { index: usize, event: BranchEvent },
}

impl fmt::Display for VictimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VictimError::EvenModulus => write!(f, "compact inversion requires an odd modulus"),
            VictimError::NotCoprime(g) => write!(f, "operands are not coprime (gcd = {g})"),
            VictimError::ZeroInput => write!(f, "operands must be positive"),
            VictimError::ScalarOutOfRange => write!(f, "scalar outside the order-bit range"),
            VictimError::ForeignEvent { index, event } => {
                write!(f, "event {event} at index {index} is outside the variant alphabet")
            }
        }
    }
}

impl std::error::Error for VictimError {}
