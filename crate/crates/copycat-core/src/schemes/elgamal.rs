//! ElGamal signatures: r = g^k mod p, s = k^-1 (h - r x) mod (p - 1).

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::arith::{gen_prime, leading_zero_bits, mod_floor_uint, mod_inverse};

use super::{SchemeError, SignatureSample};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElGamalKey {
    pub p: BigUint,
    pub g: BigUint,
    pub x: BigUint,
    pub y: BigUint,
}

pub fn elgamal_keygen<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<ElGamalKey, SchemeError> {
    if bits < 8 {
        return Err(SchemeError::InvalidParameter("modulus must be at least 8 bits".into()));
    }
    let p = gen_prime(bits, rng);
    let g = rng.gen_biguint_range(&BigUint::from(2u32), &(&p - 1u32));
    let x = rng.gen_biguint_range(&BigUint::from(2u32), &(&p - 2u32));
    let y = g.modpow(&x, &p);
    Ok(ElGamalKey { p, g, x, y })
}

/// Sign `h` (reduced mod p-1). Nonces must be invertible mod p-1; supplied
/// or drawn nonces that are not are resampled.
pub fn elgamal_sign<R: Rng + ?Sized>(
    key: &ElGamalKey,
    h: &BigUint,
    nonce: Option<&BigUint>,
    rng: &mut R,
) -> SignatureSample {
    let p1 = &key.p - 1u32;
    let h = h % &p1;
    let mut fixed = nonce
        .cloned()
        .filter(|k| k > &BigUint::one() && *k < p1 && k.gcd(&p1).is_one());
    loop {
        let k = match fixed.take() {
            Some(k) => k,
            None => {
                let k = rng.gen_biguint_range(&BigUint::from(2u32), &p1);
                if !k.gcd(&p1).is_one() {
                    continue;
                }
                k
            }
        };
        let r = key.g.modpow(&k, &key.p);
        let kinv = mod_inverse(&k, &p1).expect("gcd checked above");
        let hr = BigInt::from(h.clone()) - BigInt::from(&r * &key.x);
        let s = (&kinv * mod_floor_uint(&hr, &p1)) % &p1;
        if s.is_zero() {
            continue;
        }
        let z = leading_zero_bits(&k, p1.bits());
        return SignatureSample { r, s, h, k: Some(k), z: Some(z) };
    }
}
