//! Binary modular inversion in the style of Knuth's extended algorithm:
//! a working vector (t1, t2, t3) is repeatedly halved and re-derived from
//! the running (u1, u2, u3) and (v1, v2, v3) vectors. Signed arithmetic is
//! used throughout because t2 and t3 go negative by construction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::mod_floor_uint;

use super::{BranchEvent, BranchTrace, Variant, VictimError};

/// Snapshot of the nine working values after one loop body, for invariant
/// inspection in tests.
#[derive(Debug, Clone)]
pub struct AlgxState {
    pub u1: BigInt,
    pub u2: BigInt,
    pub u3: BigInt,
    pub v1: BigInt,
    pub v2: BigInt,
    pub v3: BigInt,
    pub t1: BigInt,
    pub t2: BigInt,
    pub t3: BigInt,
}

pub fn algx_modinv(u: &BigUint, v: &BigUint) -> Result<(BigUint, BranchTrace), VictimError> {
    algx_modinv_observed(u, v, |_| {})
}

/// Same as [`algx_modinv`], invoking `observe` after every outer loop body.
pub fn algx_modinv_observed<F: FnMut(&AlgxState)>(
    u: &BigUint,
    v: &BigUint,
    mut observe: F,
) -> Result<(BigUint, BranchTrace), VictimError> {
    if u.is_zero() || v.is_zero() {
        return Err(VictimError::ZeroInput);
    }
    if u.is_even() && v.is_even() {
        return Err(VictimError::NotCoprime(u.gcd(v)));
    }
    let mut trace = BranchTrace::new(Variant::AlgX);

    let u0 = BigInt::from(u.clone());
    let v0 = BigInt::from(v.clone());
    let mut u1 = BigInt::one();
    let mut u2 = BigInt::zero();
    let mut u3 = u0.clone();
    let mut v1 = v0.clone();
    let mut v2 = &u1 - &u0;
    let mut v3 = v0.clone();
    let (mut t1, mut t2, mut t3);
    if u0.is_odd() {
        t1 = BigInt::zero();
        t2 = -BigInt::one();
        t3 = -v0.clone();
        trace.push(BranchEvent::InitUOdd);
    } else {
        t1 = BigInt::one();
        t2 = BigInt::zero();
        t3 = u0.clone();
        trace.push(BranchEvent::InitUEven);
    }

    while !t3.is_zero() {
        while t3.is_even() {
            if t1.is_odd() || t2.is_odd() {
                t1 += &v0;
                t2 -= &u0;
                trace.push(BranchEvent::T3HalveAdjust);
            } else {
                trace.push(BranchEvent::T3HalvePlain);
            }
            t1 /= 2;
            t2 /= 2;
            t3 /= 2;
            debug_assert_eq!(&t1 * &u0 + &t2 * &v0, t3);
        }
        if t3.is_positive() {
            u1 = t1.clone();
            u2 = t2.clone();
            u3 = t3.clone();
            trace.push(BranchEvent::T3Pos);
        } else {
            v1 = &v0 - &t1;
            v2 = -&u0 - &t2;
            v3 = -&t3;
            trace.push(BranchEvent::T3Neg);
        }
        t1 = &u1 - &v1;
        t2 = &u2 - &v2;
        t3 = &u3 - &v3;
        if t1.is_negative() {
            t1 += &v0;
            t2 -= &u0;
            trace.push(BranchEvent::T1NegAdjust);
        } else {
            trace.push(BranchEvent::T1Nonneg);
        }
        debug_assert_eq!(&t1 * &u0 + &t2 * &v0, t3);
        debug_assert_eq!(&u1 * &u0 + &u2 * &v0, u3);
        debug_assert_eq!(&v1 * &u0 + &v2 * &v0, v3);
        observe(&AlgxState {
            u1: u1.clone(),
            u2: u2.clone(),
            u3: u3.clone(),
            v1: v1.clone(),
            v2: v2.clone(),
            v3: v3.clone(),
            t1: t1.clone(),
            t2: t2.clone(),
            t3: t3.clone(),
        });
    }

    let gcd = u3.to_biguint().expect("gcd is non-negative");
    if !gcd.is_one() {
        return Err(VictimError::NotCoprime(gcd));
    }
    let inverse = mod_floor_uint(&u1, v);
    Ok((inverse, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mod_inverse;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};

    #[test]
    fn inverts_3_mod_7() {
        let (inv, trace) = algx_modinv(&BigUint::from(3u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(inv.to_u64(), Some(5));
        assert_eq!(trace.events[0], BranchEvent::InitUOdd);
    }

    #[test]
    fn matches_reference_on_random_inputs() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let u = rng.gen_range(1u64..1 << 32);
            let v = rng.gen_range(2u64..1 << 32);
            let (ub, vb) = (BigUint::from(u), BigUint::from(v));
            match algx_modinv(&ub, &vb) {
                Ok((inv, _)) => {
                    assert_eq!(Some(inv), mod_inverse(&ub, &vb), "u={u} v={v}")
                }
                Err(VictimError::NotCoprime(_)) => {
                    assert_eq!(mod_inverse(&ub, &vb), None, "u={u} v={v}")
                }
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn even_modulus_is_supported() {
        // Nonce inversion mod (p-1) needs even moduli.
        let (inv, _) = algx_modinv(&BigUint::from(7u32), &BigUint::from(22u32)).unwrap();
        assert_eq!((inv * 7u32) % 22u32, BigUint::one());
    }
}
