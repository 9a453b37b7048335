//! DSA key generation and signing over a small-cofactor group: the prime
//! modulus is found as c*n + 1 for the generated order n, which keeps
//! fixtures fast at any order size.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::arith::{gen_prime, is_probable_prime, leading_zero_bits, mod_inverse};

use super::{SchemeError, SignatureSample};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsaKey {
    /// Prime modulus.
    pub p: BigUint,
    /// Prime order of the subgroup, divides p - 1.
    pub n: BigUint,
    pub g: BigUint,
    /// Private key, 1 < x < n - 1.
    pub x: BigUint,
    /// Public key g^x mod p.
    pub y: BigUint,
}

pub fn dsa_keygen<R: Rng + ?Sized>(order_bits: u64, rng: &mut R) -> Result<DsaKey, SchemeError> {
    if order_bits < 8 {
        return Err(SchemeError::InvalidParameter("order must be at least 8 bits".into()));
    }
    let n = gen_prime(order_bits, rng);
    let p = loop {
        let c = BigUint::from(rng.gen_range(1u64..1 << 16) * 2);
        let cand = &c * &n + 1u32;
        if is_probable_prime(&cand, rng) {
            break cand;
        }
    };
    let cofactor = (&p - 1u32) / &n;
    let g = loop {
        let h = rng.gen_biguint_range(&BigUint::from(2u32), &(&p - 1u32));
        let g = h.modpow(&cofactor, &p);
        if !g.is_one() {
            break g;
        }
    };
    let x = rng.gen_biguint_range(&BigUint::from(2u32), &(&n - 1u32));
    let y = g.modpow(&x, &p);
    Ok(DsaKey { p, n, g, x, y })
}

/// Sign `h` (already reduced mod n). A supplied nonce is used when it is in
/// range and produces nonzero (r, s); otherwise nonces are resampled.
pub fn dsa_sign<R: Rng + ?Sized>(
    key: &DsaKey,
    h: &BigUint,
    nonce: Option<&BigUint>,
    rng: &mut R,
) -> SignatureSample {
    let n = &key.n;
    let h = h % n;
    let mut fixed = nonce.cloned().filter(|k| k > &BigUint::one() && *k < n - 1u32);
    loop {
        let k = match fixed.take() {
            Some(k) => k,
            None => rng.gen_biguint_range(&BigUint::from(2u32), &(n - 1u32)),
        };
        let r = key.g.modpow(&k, &key.p) % n;
        if r.is_zero() {
            continue;
        }
        let kinv = mod_inverse(&k, n).expect("n is prime and 0 < k < n");
        let s = (&kinv * (&h + &r * &key.x)) % n;
        if s.is_zero() {
            continue;
        }
        let z = leading_zero_bits(&k, n.bits());
        return SignatureSample { r, s, h, k: Some(k), z: Some(z) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn tiny_key() -> DsaKey {
        // p = 23, n = 11, g = 4 (order 11), x = 7, y = 4^7 mod 23 = 8
        DsaKey {
            p: BigUint::from(23u32),
            n: BigUint::from(11u32),
            g: BigUint::from(4u32),
            x: BigUint::from(7u32),
            y: BigUint::from(8u32),
        }
    }

    #[test]
    fn tiny_group_worked_example() {
        // Direct evaluation with k = 9, h = 5:
        //   r = 4^9 mod 23 mod 11 = 13 mod 11 = 2
        //   s = 9^-1 (5 + 2*7) mod 11 = 5 * 19 mod 11 = 7
        let key = tiny_key();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let sig = dsa_sign(&key, &BigUint::from(5u32), Some(&BigUint::from(9u32)), &mut rng);
        assert_eq!(sig.k.as_ref(), Some(&BigUint::from(9u32)));
        assert_eq!(sig.r, BigUint::from(2u32));
        assert_eq!(sig.s, BigUint::from(7u32));
    }

    #[test]
    fn defining_congruence_holds() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let key = dsa_keygen(64, &mut rng).unwrap();
        for i in 0..20u32 {
            let sig = dsa_sign(&key, &BigUint::from(1000 + i), None, &mut rng);
            let k = sig.k.clone().unwrap();
            // s*k = h + r*x (mod n)
            assert_eq!(
                (&sig.s * &k) % &key.n,
                (&sig.h + &sig.r * &key.x) % &key.n
            );
            assert_eq!(sig.z.unwrap(), key.n.bits() - k.bits());
        }
    }

    #[test]
    fn out_of_range_fixed_nonce_is_resampled() {
        let key = tiny_key();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let sig = dsa_sign(&key, &BigUint::from(5u32), Some(&BigUint::one()), &mut rng);
        let k = sig.k.unwrap();
        assert!(k > BigUint::one() && k < &key.n - 1u32);
    }

    #[test]
    fn group_structure() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let key = dsa_keygen(32, &mut rng).unwrap();
        assert!(((&key.p - 1u32) % &key.n).is_zero());
        assert_eq!(key.g.modpow(&key.n, &key.p), BigUint::one());
        assert_eq!(key.y, key.g.modpow(&key.x, &key.p));
    }
}
