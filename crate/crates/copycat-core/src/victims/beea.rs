//! Binary extended Euclidean inversion, in the straightforward layout (four
//! accumulators, any modulus) and the compact layout (two accumulators, odd
//! modulus only).
//!
//! Both loops run: halve `u_i` while even, halve `v_i` while even, then
//! compare and subtract; repeat until `u_i` reaches zero. Every halving
//! records whether the paired accumulator needed an odd-adjust, and every
//! comparison records which side was reduced. Loop entry and exit are
//! implicit in the event stream.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::mod_floor_uint;

use super::{BranchEvent, BranchTrace, Variant, VictimError};

/// Modular inversion keeping all four accumulators. Returns `u^-1 mod v`
/// and the branch trace of the run.
pub fn beea_full(u: &BigUint, v: &BigUint) -> Result<(BigUint, BranchTrace), VictimError> {
    if u.is_zero() || v.is_zero() {
        return Err(VictimError::ZeroInput);
    }
    // Both even: gcd >= 2, and the accumulator halvings would not be exact.
    if u.is_even() && v.is_even() {
        return Err(VictimError::NotCoprime(u.gcd(v)));
    }
    let mut trace = BranchTrace::new(Variant::FullBeea);

    let u0 = BigInt::from(u.clone());
    let v0 = BigInt::from(v.clone());
    let mut ui = u0.clone();
    let mut vi = v0.clone();
    let mut a = BigInt::one();
    let mut b = BigInt::zero();
    let mut c = BigInt::zero();
    let mut d = BigInt::one();

    loop {
        while ui.is_even() {
            ui /= 2;
            if a.is_odd() || b.is_odd() {
                a += &v0;
                b -= &u0;
                trace.push(BranchEvent::UHalveAdjust);
            } else {
                trace.push(BranchEvent::UHalvePlain);
            }
            a /= 2;
            b /= 2;
            debug_assert_eq!(&a * &u0 + &b * &v0, ui);
        }
        while vi.is_even() {
            vi /= 2;
            if c.is_odd() || d.is_odd() {
                c += &v0;
                d -= &u0;
                trace.push(BranchEvent::VHalveAdjust);
            } else {
                trace.push(BranchEvent::VHalvePlain);
            }
            c /= 2;
            d /= 2;
            debug_assert_eq!(&c * &u0 + &d * &v0, vi);
        }
        if ui >= vi {
            ui -= &vi;
            a -= &c;
            b -= &d;
            trace.push(BranchEvent::CmpS1);
        } else {
            vi -= &ui;
            c -= &a;
            d -= &b;
            trace.push(BranchEvent::CmpS2);
        }
        if ui.is_zero() {
            break;
        }
    }

    let gcd = vi.to_biguint().expect("gcd is non-negative");
    if !gcd.is_one() {
        return Err(VictimError::NotCoprime(gcd));
    }
    // c * u + d * v = 1, so c is the inverse of u; normalize into [1, v-1].
    let inverse = mod_floor_uint(&c, v);
    Ok((inverse, trace))
}

/// Compact inversion for odd moduli: the side paired with the modulus keeps
/// no accumulators at all, and both adjusts subtract the modulus.
pub fn beea_compact(u: &BigUint, v: &BigUint) -> Result<(BigUint, BranchTrace), VictimError> {
    if u.is_zero() || v.is_zero() {
        return Err(VictimError::ZeroInput);
    }
    if v.is_even() {
        return Err(VictimError::EvenModulus);
    }
    if v.is_one() {
        return Err(VictimError::ZeroInput);
    }
    let mut trace = BranchTrace::new(Variant::CompactBeea);

    let value = u % v;
    if value.is_zero() {
        return Err(VictimError::NotCoprime(v.clone()));
    }
    let modulus = BigInt::from(v.clone());
    // u_i starts at the modulus, v_i at the reduced value.
    let mut ui = modulus.clone();
    let mut vi = BigInt::from(value.clone());
    let mut b = BigInt::zero();
    let mut d = BigInt::one();

    loop {
        while ui.is_even() {
            ui /= 2;
            if b.is_odd() {
                b -= &modulus;
                trace.push(BranchEvent::UHalveAdjust);
            } else {
                trace.push(BranchEvent::UHalvePlain);
            }
            b /= 2;
        }
        while vi.is_even() {
            vi /= 2;
            if d.is_odd() {
                d -= &modulus;
                trace.push(BranchEvent::VHalveAdjust);
            } else {
                trace.push(BranchEvent::VHalvePlain);
            }
            d /= 2;
        }
        if ui >= vi {
            ui -= &vi;
            b -= &d;
            trace.push(BranchEvent::CmpS1);
        } else {
            vi -= &ui;
            d -= &b;
            trace.push(BranchEvent::CmpS2);
        }
        debug_assert_eq!(
            mod_floor_uint(&(&b * BigInt::from(value.clone())), v),
            mod_floor_uint(&ui, v)
        );
        debug_assert_eq!(
            mod_floor_uint(&(&d * BigInt::from(value.clone())), v),
            mod_floor_uint(&vi, v)
        );
        if ui.is_zero() {
            break;
        }
    }

    let gcd = vi.to_biguint().expect("gcd is non-negative");
    if !gcd.is_one() {
        return Err(VictimError::NotCoprime(gcd));
    }
    let inverse = mod_floor_uint(&d, v);
    Ok((inverse, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mod_inverse;
    use num_traits::ToPrimitive;

    fn brute_inverse(a: u64, m: u64) -> Option<u64> {
        (1..m).find(|x| (a as u128 * *x as u128) % m as u128 == 1)
    }

    #[test]
    fn full_inverts_3_mod_7() {
        let (inv, trace) = beea_full(&BigUint::from(3u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(inv.to_u64(), brute_inverse(3, 7));
        // Recorded trace replays to the same result.
        let (again, trace2) = beea_full(&BigUint::from(3u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(inv, again);
        assert_eq!(trace, trace2);
    }

    #[test]
    fn full_u_equals_one_has_no_u_adjusts() {
        let (inv, trace) = beea_full(&BigUint::one(), &BigUint::from(97u32)).unwrap();
        assert!(inv.is_one());
        assert!(!trace.events.contains(&BranchEvent::UHalveAdjust));
    }

    #[test]
    fn full_rejects_non_coprime() {
        match beea_full(&BigUint::from(4u32), &BigUint::from(8u32)) {
            Err(VictimError::NotCoprime(g)) => assert_eq!(g, BigUint::from(4u32)),
            other => panic!("expected NotCoprime, got {other:?}"),
        }
    }

    #[test]
    fn compact_inverts_3_mod_7() {
        let (inv, _) = beea_compact(&BigUint::from(3u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(inv.to_u64(), brute_inverse(3, 7));
    }

    #[test]
    fn compact_rejects_even_modulus() {
        assert_eq!(
            beea_compact(&BigUint::from(3u32), &BigUint::from(8u32)),
            Err(VictimError::EvenModulus)
        );
    }

    #[test]
    fn variants_agree_and_match_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        let mut coprime_seen = 0;
        for _ in 0..2000 {
            let u = rng.gen_range(1u64..1 << 32);
            let v = rng.gen_range(2u64..1 << 32) | 1;
            let (ub, vb) = (BigUint::from(u), BigUint::from(v));
            let reference = mod_inverse(&(&ub % &vb), &vb);
            match beea_full(&ub, &vb) {
                Ok((inv, _)) => {
                    assert_eq!(Some(inv.clone()), reference, "full u={u} v={v}");
                    let (cinv, _) = beea_compact(&ub, &vb).unwrap();
                    assert_eq!(cinv, inv, "compact u={u} v={v}");
                    coprime_seen += 1;
                }
                Err(VictimError::NotCoprime(_)) => assert_eq!(reference, None),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(coprime_seen > 1000);
    }
}
