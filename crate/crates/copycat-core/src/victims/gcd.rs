//! GCD victims: the binary GCD with four parity cases and a swap check
//! after each reduction, and the textbook Euclidean GCD whose only leakage
//! is the length of its division chain.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::{BranchEvent, BranchTrace, Variant, VictimError};

/// Binary GCD. The trace records the initial swap outcome, one parity-case
/// event per iteration, and the swap outcome after every reduction except
/// the both-even case.
pub fn openssl_bgcd(a: &BigUint, b: &BigUint) -> Result<(BigUint, BranchTrace), VictimError> {
    if a.is_zero() || b.is_zero() {
        return Err(VictimError::ZeroInput);
    }
    let mut trace = BranchTrace::new(Variant::OpensslGcd);
    let mut a = a.clone();
    let mut b = b.clone();
    let mut shifts = 0u64;

    let swap_if_needed = |a: &mut BigUint, b: &mut BigUint, trace: &mut BranchTrace| {
        if *a < *b {
            std::mem::swap(a, b);
            trace.push(BranchEvent::GcdSwap);
        } else {
            trace.push(BranchEvent::GcdNoswap);
        }
    };

    swap_if_needed(&mut a, &mut b, &mut trace);
    while !b.is_zero() {
        match (a.is_odd(), b.is_odd()) {
            (true, true) => {
                trace.push(BranchEvent::GcdOo);
                a -= &b;
                a >>= 1;
                swap_if_needed(&mut a, &mut b, &mut trace);
            }
            (true, false) => {
                trace.push(BranchEvent::GcdOe);
                b >>= 1;
                swap_if_needed(&mut a, &mut b, &mut trace);
            }
            (false, true) => {
                trace.push(BranchEvent::GcdEo);
                a >>= 1;
                swap_if_needed(&mut a, &mut b, &mut trace);
            }
            (false, false) => {
                trace.push(BranchEvent::GcdEe);
                a >>= 1;
                b >>= 1;
                shifts += 1;
            }
        }
    }
    Ok((a << shifts, trace))
}

/// Textbook Euclidean GCD; emits one `DIV_STEP` per division.
pub fn euclid_gcd(a: &BigUint, b: &BigUint) -> Result<(BigUint, BranchTrace), VictimError> {
    if a.is_zero() || b.is_zero() {
        return Err(VictimError::ZeroInput);
    }
    let mut trace = BranchTrace::new(Variant::EuclidGcd);
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
        trace.push(BranchEvent::DivStep);
    }
    Ok((a, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};

    #[test]
    fn bgcd_12_8_has_an_even_even_step() {
        let (g, trace) = openssl_bgcd(&BigUint::from(12u32), &BigUint::from(8u32)).unwrap();
        assert_eq!(g, BigUint::from(4u32));
        assert!(trace.events.contains(&BranchEvent::GcdEe));
    }

    #[test]
    fn bgcd_equal_inputs() {
        let a = BigUint::from(21u32);
        let (g, _) = openssl_bgcd(&a, &a).unwrap();
        assert_eq!(g, a);
    }

    #[test]
    fn bgcd_matches_euclid_oracle() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let a = BigUint::from(rng.gen_range(1u64..1 << 48));
            let b = BigUint::from(rng.gen_range(1u64..1 << 48));
            let (g, _) = openssl_bgcd(&a, &b).unwrap();
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn euclid_fibonacci_chain_length() {
        // Adjacent Fibonacci inputs are the worst case for the division chain.
        let (mut x, mut y) = (1u64, 1u64); // F_1, F_2
        for _ in 0..18 {
            let t = x + y;
            x = y;
            y = t;
        }
        // x = F_19, y = F_20
        let (g, trace) = euclid_gcd(&BigUint::from(y), &BigUint::from(x)).unwrap();
        assert_eq!(g, BigUint::from(1u32));
        assert_eq!(trace.len(), 18);
    }

    #[test]
    fn euclid_multiple_takes_one_division() {
        let (g, trace) = euclid_gcd(&BigUint::from(35u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(g, BigUint::from(7u32));
        assert_eq!(trace.len(), 1);
    }
}
