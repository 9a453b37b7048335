//! Step model of an always-add-and-double scalar multiplication that burns
//! dummy iterations for every leading zero bit of the scalar. The observable
//! is one step event per processed bit position, top bit first.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{BranchEvent, BranchTrace, Variant, VictimError};

/// One event per bit position of a `order_bits`-wide scalar: `DUMMY_STEP`
/// for each leading zero, `REAL_STEP` from the topmost set bit down.
pub fn ecc_mulmod_steps(k: &BigUint, order_bits: u64) -> Result<BranchTrace, VictimError> {
    if k.is_zero() || k.bits() > order_bits {
        return Err(VictimError::ScalarOutOfRange);
    }
    let mut trace = BranchTrace::new(Variant::EccMulmod);
    let z = order_bits - k.bits();
    for _ in 0..z {
        trace.push(BranchEvent::DummyStep);
    }
    for _ in 0..k.bits() {
        trace.push(BranchEvent::RealStep);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_zeros_become_dummy_steps() {
        let trace = ecc_mulmod_steps(&BigUint::from(0b00010110u32), 8).unwrap();
        let kinds: Vec<_> = trace.events.iter().map(|e| e.name()).collect();
        assert_eq!(
            kinds,
            [
                "DUMMY_STEP",
                "DUMMY_STEP",
                "DUMMY_STEP",
                "REAL_STEP",
                "REAL_STEP",
                "REAL_STEP",
                "REAL_STEP",
                "REAL_STEP"
            ]
        );
    }

    #[test]
    fn top_bit_set_means_no_dummies() {
        let trace = ecc_mulmod_steps(&BigUint::from(0x80u32), 8).unwrap();
        assert!(trace.events.iter().all(|e| *e == BranchEvent::RealStep));
    }

    #[test]
    fn k_one_is_all_dummies_then_one_real() {
        let trace = ecc_mulmod_steps(&BigUint::from(1u32), 8).unwrap();
        assert_eq!(trace.events[..7], [BranchEvent::DummyStep; 7]);
        assert_eq!(trace.events[7], BranchEvent::RealStep);
    }

    #[test]
    fn zero_scalar_rejected() {
        assert_eq!(
            ecc_mulmod_steps(&BigUint::zero(), 8),
            Err(VictimError::ScalarOutOfRange)
        );
    }
}
