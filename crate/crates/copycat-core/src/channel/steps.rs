//! Step traces of the dummy-padded scalar multiplication. A dummy iteration
//! costs 49 instructions between consecutive accesses to the doubling
//! routine's page, a real one 46; the number of 49-entries is exactly the
//! count of leading zero bits of the scalar.

use crate::victims::{BranchEvent, BranchTrace, Variant, VictimError};

use super::ChannelError;

pub const DUMMY_STEP_WEIGHT: u32 = 49;
pub const REAL_STEP_WEIGHT: u32 = 46;

/// Per-iteration step counts of the scalar-multiplication victim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub steps: Vec<u32>,
}

impl StepTrace {
    pub fn prefix(&self, len: usize) -> StepTrace {
        StepTrace { steps: self.steps[..len.min(self.steps.len())].to_vec() }
    }
}

pub fn encode_steps(trace: &BranchTrace) -> Result<StepTrace, VictimError> {
    let mut steps = Vec::with_capacity(trace.len());
    for (i, ev) in trace.events.iter().enumerate() {
        match ev {
            BranchEvent::DummyStep => steps.push(DUMMY_STEP_WEIGHT),
            BranchEvent::RealStep => steps.push(REAL_STEP_WEIGHT),
            other => return Err(VictimError::ForeignEvent { index: i, event: *other }),
        }
    }
    debug_assert_eq!(trace.variant, Variant::EccMulmod);
    Ok(StepTrace { steps })
}

/// Leading-zero-bit count from a complete step trace; the nonce bit length
/// is `order_bits - z`.
pub fn decode_steps(st: &StepTrace, order_bits: u64) -> Result<u64, ChannelError> {
    if st.steps.len() as u64 != order_bits {
        return Err(ChannelError::MalformedSteps { index: st.steps.len() });
    }
    match decode_steps_prefix(st)? {
        ZBound::Exact(z) => Ok(z),
        // All dummies: only possible for k = 0, which the victim rejects.
        ZBound::AtLeast(_) => Err(ChannelError::MalformedSteps { index: st.steps.len() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZBound {
    Exact(u64),
    /// Prefix was all dummies; z is at least the prefix length.
    AtLeast(u64),
}

/// Decode from a prefix: once a real step appears the zero count is exact,
/// so observing the first few steps suffices to classify small z.
pub fn decode_steps_prefix(st: &StepTrace) -> Result<ZBound, ChannelError> {
    let mut z = 0u64;
    let mut seen_real = false;
    for (i, &w) in st.steps.iter().enumerate() {
        match w {
            DUMMY_STEP_WEIGHT => {
                if seen_real {
                    return Err(ChannelError::MalformedSteps { index: i });
                }
                z += 1;
            }
            REAL_STEP_WEIGHT => seen_real = true,
            _ => return Err(ChannelError::MalformedSteps { index: i }),
        }
    }
    if seen_real {
        Ok(ZBound::Exact(z))
    } else {
        Ok(ZBound::AtLeast(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::victims::ecc_mulmod_steps;
    use num_bigint::BigUint;

    #[test]
    fn three_dummies_decode_to_z_three() {
        let st = StepTrace { steps: vec![49, 49, 49, 46, 46, 46, 46, 46] };
        assert_eq!(decode_steps(&st, 8).unwrap(), 3);
    }

    #[test]
    fn all_real_is_z_zero() {
        let st = StepTrace { steps: vec![46; 8] };
        assert_eq!(decode_steps(&st, 8).unwrap(), 0);
    }

    #[test]
    fn real_before_dummy_is_malformed() {
        let st = StepTrace { steps: vec![46, 49, 46] };
        assert!(matches!(
            decode_steps(&st, 3),
            Err(ChannelError::MalformedSteps { index: 1 })
        ));
    }

    #[test]
    fn prefix_suffices_for_small_z() {
        let trace = ecc_mulmod_steps(&BigUint::from(0b10110u32), 160).unwrap();
        let st = encode_steps(&trace).unwrap();
        // Only the first 7 entries are needed to establish z < 7.
        match decode_steps_prefix(&st.prefix(7)).unwrap() {
            ZBound::Exact(z) => assert_eq!(z, 160 - 5),
            ZBound::AtLeast(z) => assert_eq!(z, 7),
        }
        let short = ecc_mulmod_steps(&((BigUint::from(1u32) << 156) + 5u32), 160).unwrap();
        let st = encode_steps(&short).unwrap();
        assert_eq!(decode_steps_prefix(&st.prefix(7)).unwrap(), ZBound::Exact(3));
    }

    #[test]
    fn encode_decode_matches_field_width_minus_bitlen() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(2);
        for _ in 0..200 {
            let k = rng.gen_range(1u64..u64::MAX);
            let trace = ecc_mulmod_steps(&BigUint::from(k), 64).unwrap();
            let st = encode_steps(&trace).unwrap();
            let z = decode_steps(&st, 64).unwrap();
            assert_eq!(z, 64 - BigUint::from(k).bits());
        }
    }
}
