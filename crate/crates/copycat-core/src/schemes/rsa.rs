//! RSA key generation with CRT parameters. Primes are plain random primes
//! (no safe-prime structure), found by trial division plus Miller–Rabin.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;

use crate::arith::{gen_prime_coprime, mod_inverse};

use super::SchemeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaKey {
    pub p: BigUint,
    pub q: BigUint,
    pub n: BigUint,
    pub e: BigUint,
    pub d: BigUint,
    pub lambda: BigUint,
    pub dp: BigUint,
    pub dq: BigUint,
    pub qinv: BigUint,
}

impl RsaKey {
    /// Exact invariant check: e*d = 1 mod lambda and qinv*q = 1 mod p.
    pub fn check(&self) -> bool {
        self.n == &self.p * &self.q
            && (&self.e * &self.d) % &self.lambda == BigUint::one()
            && (&self.qinv * &self.q) % &self.p == BigUint::one()
            && self.dp == &self.d % (&self.p - 1u32)
            && self.dq == &self.d % (&self.q - 1u32)
    }
}

/// Generate an RSA key with a `bits`-bit modulus and public exponent `e`.
/// The prime search retries until `gcd(e, p-1) = gcd(e, q-1) = 1`.
pub fn rsa_keygen<R: Rng + ?Sized>(
    bits: u64,
    e: &BigUint,
    rng: &mut R,
) -> Result<RsaKey, SchemeError> {
    if bits < 8 || bits % 2 != 0 {
        return Err(SchemeError::InvalidParameter(
            "modulus size must be even and at least 8 bits".into(),
        ));
    }
    if e.is_even() || *e < BigUint::from(3u32) {
        return Err(SchemeError::InvalidParameter(
            "public exponent must be odd and at least 3".into(),
        ));
    }
    let half = bits / 2;
    let p = gen_prime_coprime(half, e, rng);
    let q = loop {
        let q = gen_prime_coprime(half, e, rng);
        if q != p {
            break q;
        }
    };
    let n = &p * &q;
    let lambda = (&p - 1u32).lcm(&(&q - 1u32));
    let d = mod_inverse(e, &lambda).expect("prime search guaranteed gcd(e, lambda) = 1");
    let dp = &d % (&p - 1u32);
    let dq = &d % (&q - 1u32);
    let qinv = mod_inverse(&q, &p).expect("p and q are distinct primes");
    Ok(RsaKey { p, q, n, e: e.clone(), d, lambda, dp, dq, qinv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn tiny_key_example() {
        // For e = 7 and lambda = 60 (the p=11, q=13 key), brute force over
        // 1..59 gives d = 43.
        let brute_d = (1u32..60).find(|d| (7 * d) % 60 == 1).unwrap();
        assert_eq!(brute_d, 43);

        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let key = rsa_keygen(8, &BigUint::from(7u32), &mut rng).unwrap();
        assert!(key.check());
        assert_eq!(key.p.bits(), 4);
        assert_eq!(key.q.bits(), 4);
        if key.lambda == BigUint::from(60u32) {
            assert_eq!(key.d, BigUint::from(43u32));
        }
    }

    #[test]
    fn even_exponent_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert!(matches!(
            rsa_keygen(16, &BigUint::from(4u32), &mut rng),
            Err(SchemeError::InvalidParameter(_))
        ));
    }

    #[test]
    fn crt_parameter_invariant() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..5 {
            let key = rsa_keygen(128, &BigUint::from(65537u32), &mut rng).unwrap();
            assert!(key.check());
            assert_eq!((&key.qinv * &key.q) % &key.p, BigUint::one());
        }
    }

    #[test]
    fn keygen_is_deterministic_in_the_seed() {
        let e = BigUint::from(65537u32);
        let mut a = ChaCha20Rng::seed_from_u64(42);
        let mut b = ChaCha20Rng::seed_from_u64(42);
        assert_eq!(rsa_keygen(128, &e, &mut a).unwrap(), rsa_keygen(128, &e, &mut b).unwrap());
    }
}
