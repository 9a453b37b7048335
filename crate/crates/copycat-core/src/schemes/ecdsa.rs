//! ECDSA over configurable short-Weierstrass curves, with a blinded signing
//! path mirroring the masking scheme whose inversions the single-trace
//! attacks target.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::arith::{leading_zero_bits, mod_inverse};

use super::{SchemeError, SignatureSample};

/// Short-Weierstrass curve y^2 = x^3 + ax + b over GF(p), with base point
/// (gx, gy) of prime order n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub p: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub gx: BigUint,
    pub gy: BigUint,
    pub n: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine { x: BigUint, y: BigUint },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvePreset {
    /// 21-bit toy curve for fast fixtures.
    Tiny,
    /// secp160r1.
    Secp160r1,
    /// NIST P-256.
    P256,
}

impl CurvePreset {
    pub fn name(self) -> &'static str {
        match self {
            CurvePreset::Tiny => "tiny-v1",
            CurvePreset::Secp160r1 => "secp160r1",
            CurvePreset::P256 => "p256",
        }
    }

    pub fn from_name(name: &str) -> Option<CurvePreset> {
        Some(match name {
            "tiny-v1" => CurvePreset::Tiny,
            "secp160r1" => CurvePreset::Secp160r1,
            "p256" => CurvePreset::P256,
            _ => return None,
        })
    }

    pub fn curve(self) -> Curve {
        let hex = |s: &str| BigUint::parse_bytes(s.as_bytes(), 16).unwrap();
        match self {
            CurvePreset::Tiny => Curve {
                p: BigUint::from(1048583u64),
                a: BigUint::from(2u64),
                b: BigUint::from(22u64),
                gx: BigUint::from(0u64),
                gy: BigUint::from(615811u64),
                n: BigUint::from(1048799u64),
            },
            CurvePreset::Secp160r1 => Curve {
                p: hex("ffffffffffffffffffffffffffffffff7fffffff"),
                a: hex("ffffffffffffffffffffffffffffffff7ffffffc"),
                b: hex("1c97befc54bd7a8b65acf89f81d4d4adc565fa45"),
                gx: hex("4a96b5688ef573284664698968c38bb913cbfc82"),
                gy: hex("23a628553168947d59dcc912042351377ac5fb32"),
                n: hex("0100000000000000000001f4c8f927aed3ca752257"),
            },
            CurvePreset::P256 => Curve {
                p: hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff"),
                a: hex("ffffffff00000001000000000000000000000000fffffffffffffffffffffffc"),
                b: hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
                gx: hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
                gy: hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
                n: hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"),
            },
        }
    }
}

impl Curve {
    pub fn generator(&self) -> Point {
        Point::Affine { x: self.gx.clone(), y: self.gy.clone() }
    }

    pub fn is_on_curve(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = (y * y) % &self.p;
                let rhs = (x * x * x + &self.a * x + &self.b) % &self.p;
                lhs == rhs
            }
        }
    }

    fn sub_mod(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a + &self.p) - b) % &self.p
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, _) => return p2.clone(),
            (_, Point::Infinity) => return p1.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2) % &self.p == BigUint::zero() {
                return Point::Infinity;
            }
            let num = (BigUint::from(3u32) * x1 * x1 + &self.a) % &self.p;
            let den = mod_inverse(&((BigUint::from(2u32) * y1) % &self.p), &self.p)
                .expect("p prime, y != 0");
            (num * den) % &self.p
        } else {
            let num = self.sub_mod(y2, y1);
            let den = mod_inverse(&self.sub_mod(x2, x1), &self.p).expect("p prime, x1 != x2");
            (num * den) % &self.p
        };
        let x3 = self.sub_mod(&((&slope * &slope) % &self.p), &((x1 + x2) % &self.p));
        let y3 = self.sub_mod(&((&slope * self.sub_mod(x1, &x3)) % &self.p), y1);
        Point::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul(&self, k: &BigUint, pt: &Point) -> Point {
        let mut acc = Point::Infinity;
        if k.is_zero() {
            return acc;
        }
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, pt);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcdsaKey {
    pub curve: Curve,
    /// Private scalar, 1 < d < n - 1.
    pub d: BigUint,
    /// Public point d x G.
    pub q: Point,
}

pub fn ecdsa_keygen<R: Rng + ?Sized>(curve: &Curve, rng: &mut R) -> Result<EcdsaKey, SchemeError> {
    if curve.n < BigUint::from(5u32) {
        return Err(SchemeError::InvalidParameter("group too small".into()));
    }
    let d = rng.gen_biguint_range(&BigUint::from(2u32), &(&curve.n - 1u32));
    let q = curve.scalar_mul(&d, &curve.generator());
    Ok(EcdsaKey { curve: curve.clone(), d, q })
}

/// Sign `h` (reduced mod n); r is the x-coordinate of kG mod n.
pub fn ecdsa_sign<R: Rng + ?Sized>(
    key: &EcdsaKey,
    h: &BigUint,
    nonce: Option<&BigUint>,
    rng: &mut R,
) -> SignatureSample {
    let n = &key.curve.n;
    let h = h % n;
    let mut fixed = nonce.cloned().filter(|k| k > &BigUint::one() && *k < n - 1u32);
    loop {
        let k = match fixed.take() {
            Some(k) => k,
            None => rng.gen_biguint_range(&BigUint::from(2u32), &(n - 1u32)),
        };
        let r = match key.curve.scalar_mul(&k, &key.curve.generator()) {
            Point::Infinity => continue,
            Point::Affine { x, .. } => x % n,
        };
        if r.is_zero() {
            continue;
        }
        let kinv = mod_inverse(&k, n).expect("n prime");
        let s = (&kinv * (&h + &r * &key.d)) % n;
        if s.is_zero() {
            continue;
        }
        let z = leading_zero_bits(&k, n.bits());
        return SignatureSample { r, s, h, k: Some(k), z: Some(z) };
    }
}

/// A signature produced through nonce blinding. The blinded intermediate
/// s_b = k^-1 (h b + b d r) is unblinded to s = s_b b^-1; both the nonce and
/// the blinding factor are retained for ground-truth checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindedSignature {
    pub sample: SignatureSample,
    pub s_blinded: BigUint,
    pub b: BigUint,
}

pub fn ecdsa_sign_blinded<R: Rng + ?Sized>(
    key: &EcdsaKey,
    h: &BigUint,
    rng: &mut R,
) -> BlindedSignature {
    let n = &key.curve.n;
    let h = h % n;
    loop {
        let k = rng.gen_biguint_range(&BigUint::from(2u32), &(n - 1u32));
        let b = rng.gen_biguint_range(&BigUint::from(2u32), &(n - 1u32));
        let r = match key.curve.scalar_mul(&k, &key.curve.generator()) {
            Point::Infinity => continue,
            Point::Affine { x, .. } => x % n,
        };
        if r.is_zero() {
            continue;
        }
        let kinv = mod_inverse(&k, n).expect("n prime");
        let binv = mod_inverse(&b, n).expect("n prime");
        let s_blinded = (&kinv * ((&h * &b) % n + (&b * &key.d % n) * &r)) % n;
        let s = (&s_blinded * &binv) % n;
        if s.is_zero() {
            continue;
        }
        let z = leading_zero_bits(&k, n.bits());
        return BlindedSignature {
            sample: SignatureSample { r, s, h, k: Some(k), z: Some(z) },
            s_blinded,
            b,
        };
    }
}

/// Standard verification equation; the public-key check used to validate
/// recovered private scalars.
pub fn ecdsa_verify(curve: &Curve, q: &Point, h: &BigUint, r: &BigUint, s: &BigUint) -> bool {
    let n = &curve.n;
    if r.is_zero() || s.is_zero() || r >= n || s >= n {
        return false;
    }
    let w = match mod_inverse(s, n) {
        Some(w) => w,
        None => return false,
    };
    let u1 = (h * &w) % n;
    let u2 = (r * &w) % n;
    let x = curve.add(
        &curve.scalar_mul(&u1, &curve.generator()),
        &curve.scalar_mul(&u2, q),
    );
    match x {
        Point::Infinity => false,
        Point::Affine { x, .. } => &(x % n) == r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_probable_prime;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn check_preset(preset: CurvePreset) {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let c = preset.curve();
        assert!(c.is_on_curve(&c.generator()), "{}: G not on curve", preset.name());
        assert!(is_probable_prime(&c.n, &mut rng), "{}: order not prime", preset.name());
        assert_eq!(
            c.scalar_mul(&c.n, &c.generator()),
            Point::Infinity,
            "{}: n*G != infinity",
            preset.name()
        );
    }

    #[test]
    fn tiny_preset_is_a_valid_group() {
        check_preset(CurvePreset::Tiny);
    }

    #[test]
    fn secp160r1_preset_is_a_valid_group() {
        check_preset(CurvePreset::Secp160r1);
    }

    #[test]
    fn p256_preset_is_a_valid_group() {
        check_preset(CurvePreset::P256);
    }

    #[test]
    fn signatures_verify_and_satisfy_the_congruence() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let curve = CurvePreset::Tiny.curve();
        let key = ecdsa_keygen(&curve, &mut rng).unwrap();
        for i in 0..10u32 {
            let sig = ecdsa_sign(&key, &BigUint::from(777 + i), None, &mut rng);
            let k = sig.k.clone().unwrap();
            assert_eq!((&sig.s * &k) % &curve.n, (&sig.h + &sig.r * &key.d) % &curve.n);
            assert!(ecdsa_verify(&curve, &key.q, &sig.h, &sig.r, &sig.s));
        }
    }

    #[test]
    fn toy_signature_checked_by_naive_scalar_multiplication() {
        use num_traits::ToPrimitive;
        // Independent verifier: repeated addition instead of double-and-add.
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        let curve = CurvePreset::Tiny.curve();
        let key = ecdsa_keygen(&curve, &mut rng).unwrap();
        let sig = ecdsa_sign(&key, &BigUint::from(4242u32), None, &mut rng);
        let k = sig.k.clone().unwrap().to_u64().unwrap();
        let mut acc = Point::Infinity;
        let g = curve.generator();
        for _ in 0..k {
            acc = curve.add(&acc, &g);
        }
        match acc {
            Point::Affine { x, .. } => assert_eq!(x % &curve.n, sig.r),
            Point::Infinity => panic!("kG must be affine"),
        }
    }

    #[test]
    fn blinded_signature_unblinds_to_a_valid_one() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let curve = CurvePreset::Tiny.curve();
        let key = ecdsa_keygen(&curve, &mut rng).unwrap();
        let blinded = ecdsa_sign_blinded(&key, &BigUint::from(999u32), &mut rng);
        let s = &blinded.sample;
        assert!(ecdsa_verify(&curve, &key.q, &s.h, &s.r, &s.s));
        // s_b = s * b mod n
        assert_eq!((&s.s * &blinded.b) % &curve.n, blinded.s_blinded);
    }
}
