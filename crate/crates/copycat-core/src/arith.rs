//! Shared big-integer helpers: probabilistic primality, prime search, and
//! modular inversion.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

/// Modular inverse of `a` mod `m`, if it exists.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    let inv = ext.x.mod_floor(&m);
    inv.to_biguint()
}

/// Non-negative remainder of a signed value modulo an unsigned modulus.
pub fn mod_floor_uint(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    x.mod_floor(&m).to_biguint().expect("mod_floor is non-negative")
}

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = 2000usize;
        let mut sieve = vec![true; limit];
        let mut primes = Vec::new();
        for i in 2..limit {
            if sieve[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j < limit {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Miller–Rabin with 40 random rounds, after trial division by small primes.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in small_primes() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..40 {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime with exactly `bits` bits (top and bottom bits set).
pub fn gen_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    assert!(bits >= 2, "prime size must be at least 2 bits");
    loop {
        let mut cand = rng.gen_biguint(bits);
        cand.set_bit(bits - 1, true);
        cand.set_bit(0, true);
        if is_probable_prime(&cand, rng) {
            return cand;
        }
    }
}

/// Random prime `p` with `gcd(e, p - 1) = 1`.
pub fn gen_prime_coprime<R: Rng + ?Sized>(bits: u64, e: &BigUint, rng: &mut R) -> BigUint {
    loop {
        let p = gen_prime(bits, rng);
        if (&p - 1u32).gcd(e).is_one() {
            return p;
        }
    }
}

/// Number of leading zero bits of `k` inside a `width`-bit field.
pub fn leading_zero_bits(k: &BigUint, width: u64) -> u64 {
    let len = k.bits();
    assert!(len <= width, "value does not fit the field");
    width - len
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn inverse_small_cases() {
        // (3, 7) -> 5, brute force over residues agrees
        let inv = mod_inverse(&BigUint::from(3u32), &BigUint::from(7u32)).unwrap();
        let brute = (0u32..7)
            .find(|x| (3 * x) % 7 == 1)
            .map(BigUint::from)
            .unwrap();
        assert_eq!(inv, brute);
        assert_eq!(
            mod_inverse(&BigUint::one(), &BigUint::from(91u32)),
            Some(BigUint::one())
        );
        assert_eq!(mod_inverse(&BigUint::from(4u32), &BigUint::from(8u32)), None);
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let primes: Vec<u32> = (2u32..500).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        for n in 2u32..500 {
            let got = is_probable_prime(&BigUint::from(n), &mut rng);
            assert_eq!(got, primes.contains(&n), "n={n}");
        }
    }

    #[test]
    fn generated_primes_have_requested_size() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for bits in [8u64, 16, 64, 128] {
            let p = gen_prime(bits, &mut rng);
            assert_eq!(p.bits(), bits);
        }
    }
}
