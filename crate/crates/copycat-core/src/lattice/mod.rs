//! Hidden-number-problem key recovery from signatures with known nonce
//! leading-zero counts.
//!
//! Each signature gives `k_i = u_i + t_i * d (mod n)` with
//! `t_i = r_i s_i^-1`, `u_i = h_i s_i^-1`; when every selected nonce has at
//! least `z` leading zero bits, the `k_i` are short and the embedding
//! lattice below contains a short vector carrying `d`. The basis is reduced
//! with the in-tree integer LLL and every candidate is validated against
//! the public key before being returned.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arith::mod_inverse;
use crate::schemes::SignatureSample;

mod lll;
mod samples;

pub use lll::{check_reduction, lll_reduce, Delta};
pub use samples::{parse_samples, write_samples};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// Fewer than two usable samples, or z out of range.
    BadInstance(String),
    /// delta outside (1/4, 1).
    BadDelta,
    /// Rows are linearly dependent.
    RankDeficient,
    NotSizeReduced { row: usize, col: usize },
    LovaszViolated { row: usize },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::BadInstance(why) => write!(f, "bad lattice instance: {why}"),
            LatticeError::BadDelta => write!(f, "delta must lie in (1/4, 1)"),
            LatticeError::RankDeficient => write!(f, "basis rows are linearly dependent"),
            LatticeError::NotSizeReduced { row, col } => {
                write!(f, "|mu[{row}][{col}]| > 1/2 after reduction")
            }
            LatticeError::LovaszViolated { row } => {
                write!(f, "Lovász condition fails at row {row}")
            }
        }
    }
}

impl std::error::Error for LatticeError {}

/// Hidden-number-problem instance: `k_i = u_i + t_i * d (mod n)` with
/// `0 < k_i < n / 2^z`.
#[derive(Debug, Clone)]
pub struct HnpInstance {
    pub n: BigUint,
    /// (t_i, u_i) pairs.
    pub samples: Vec<(BigUint, BigUint)>,
    /// Guaranteed leading-zero-bit bound of the nonces.
    pub z: u64,
}

impl HnpInstance {
    /// Derive (t_i, u_i) from signature samples: t = r s^-1, u = h s^-1.
    pub fn from_signatures(
        n: &BigUint,
        sigs: &[SignatureSample],
        z: u64,
    ) -> Result<HnpInstance, LatticeError> {
        let mut samples = Vec::with_capacity(sigs.len());
        for sig in sigs {
            let sinv = mod_inverse(&sig.s, n)
                .ok_or_else(|| LatticeError::BadInstance("signature s not invertible".into()))?;
            samples.push(((&sig.r * &sinv) % n, (&sig.h * &sinv) % n));
        }
        Ok(HnpInstance { n: n.clone(), samples, z })
    }
}

/// Square integer basis of dimension (#samples + 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Build the embedding basis: m scaled modular rows, the t-row carrying the
/// hidden number in coordinate m+1, and the centered u-row closing with n.
pub fn build_hnp_lattice(inst: &HnpInstance) -> Result<LatticeBasis, LatticeError> {
    let m = inst.samples.len();
    if m < 2 {
        return Err(LatticeError::BadInstance("need at least 2 samples".into()));
    }
    if inst.z < 1 || (&inst.n >> inst.z).is_zero() {
        return Err(LatticeError::BadInstance("z out of range for this group".into()));
    }
    let dim = m + 2;
    let scale = BigInt::from(BigUint::one() << (inst.z + 1)); // 2^(z+1)
    let n = BigInt::from(inst.n.clone());
    let center = &n / &scale; // n / 2^(z+1), the centering offset

    let mut rows = vec![vec![BigInt::zero(); dim]; dim];
    for (i, _) in inst.samples.iter().enumerate() {
        rows[i][i] = &scale * &n;
    }
    for (i, (t, _)) in inst.samples.iter().enumerate() {
        rows[m][i] = &scale * BigInt::from(t.clone());
    }
    rows[m][m] = BigInt::one();
    for (i, (_, u)) in inst.samples.iter().enumerate() {
        rows[m + 1][i] = &scale * (BigInt::from(u.clone()) - &center);
    }
    rows[m + 1][m + 1] = n;
    Ok(LatticeBasis { rows })
}

/// The short vector the construction aims at, for a known key and nonces:
/// `(2^(z+1) k_i - n, ..., d, n)`. Tests check membership and norm.
pub fn hnp_target_vector(inst: &HnpInstance, d: &BigUint, nonces: &[BigUint]) -> Vec<BigInt> {
    let m = inst.samples.len();
    let scale = BigInt::from(BigUint::one() << (inst.z + 1));
    let n = BigInt::from(inst.n.clone());
    let mut v = Vec::with_capacity(m + 2);
    for k in nonces {
        v.push(&scale * BigInt::from(k.clone()) - &n);
    }
    v.push(BigInt::from(d.clone()));
    v.push(n);
    debug_assert_eq!(v.len(), m + 2);
    v
}

/// Scan a reduced basis for the hidden number: rows whose final coordinate
/// is ±n carry a candidate (up to sign) in coordinate m+1. Candidates are
/// validated with `validate` (the public-key check); nothing unvalidated is
/// ever returned.
pub fn extract_key(
    reduced: &LatticeBasis,
    n: &BigUint,
    validate: impl Fn(&BigUint) -> bool,
) -> Option<BigUint> {
    let dim = reduced.dim();
    if dim < 2 {
        return None;
    }
    let m = dim - 2;
    let n_int = BigInt::from(n.clone());
    for row in &reduced.rows {
        if row[m + 1].magnitude() != n_int.magnitude() {
            continue;
        }
        let raw = if row[m + 1] == n_int { row[m].clone() } else { -&row[m] };
        let cand = raw.mod_floor_biguint(n);
        if !cand.is_zero() && validate(&cand) {
            return Some(cand);
        }
    }
    None
}

trait ModFloorBigUint {
    fn mod_floor_biguint(&self, m: &BigUint) -> BigUint;
}

impl ModFloorBigUint for BigInt {
    fn mod_floor_biguint(&self, m: &BigUint) -> BigUint {
        crate::arith::mod_floor_uint(self, m)
    }
}

/// Full pipeline: filter signatures by observed nonce shortness, build the
/// lattice, reduce, and scan for a validated key. Returns None when no
/// candidate validates (the caller may enlarge the batch).
pub fn recover_key_from_biased_nonces(
    sigs: &[SignatureSample],
    n: &BigUint,
    z_min: u64,
    batch: usize,
    validate: impl Fn(&BigUint) -> bool,
) -> Result<Option<BigUint>, LatticeError> {
    let filtered: Vec<SignatureSample> = sigs
        .iter()
        .filter(|s| s.z.map_or(false, |z| z >= z_min))
        .take(batch)
        .cloned()
        .collect();
    if filtered.len() < 2 {
        return Err(LatticeError::BadInstance(format!(
            "only {} signatures with z >= {z_min}",
            filtered.len()
        )));
    }
    let inst = HnpInstance::from_signatures(n, &filtered, z_min)?;
    let basis = build_hnp_lattice(&inst)?;
    let reduced = lll_reduce(&basis, Delta::strong())?;
    Ok(extract_key(&reduced, n, validate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{ecdsa_keygen, ecdsa_sign, CurvePreset};
    use num_bigint::RandBigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn dimensions_match_the_sample_count() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let n = crate::arith::gen_prime(64, &mut rng);
        let mut mk = |m: usize, z: u64| {
            let samples = (0..m)
                .map(|_| (rng.gen_biguint_below(&n), rng.gen_biguint_below(&n)))
                .collect();
            HnpInstance { n: n.clone(), samples, z }
        };
        let inst = mk(42, 7);
        assert_eq!(build_hnp_lattice(&inst).unwrap().dim(), 44);
        let inst = mk(2, 3);
        assert_eq!(build_hnp_lattice(&inst).unwrap().dim(), 4);
    }

    #[test]
    fn z_larger_than_group_is_rejected() {
        let inst = HnpInstance {
            n: BigUint::from(97u32),
            samples: vec![
                (BigUint::from(3u32), BigUint::from(4u32)),
                (BigUint::from(5u32), BigUint::from(6u32)),
            ],
            z: 8, // 97 >> 8 == 0
        };
        assert!(build_hnp_lattice(&inst).is_err());
    }

    #[test]
    fn target_vector_lies_in_the_lattice_and_is_short() {
        // Ground-truth membership: solve for the integer combination
        // explicitly, then compare norms against the Gaussian heuristic.
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let curve = CurvePreset::Secp160r1.curve();
        let key = ecdsa_keygen(&curve, &mut rng).unwrap();
        let z = 6u64;
        let mut sigs = Vec::new();
        let mut nonces = Vec::new();
        while sigs.len() < 30 {
            let h = rng.gen_biguint_below(&curve.n);
            let bound = &curve.n >> z;
            let k = rng.gen_biguint_range(&BigUint::from(2u32), &bound);
            let sig = ecdsa_sign(&key, &h, Some(&k), &mut rng);
            nonces.push(sig.k.clone().unwrap());
            sigs.push(sig);
        }
        let inst = HnpInstance::from_signatures(&curve.n, &sigs, z).unwrap();
        let basis = build_hnp_lattice(&inst).unwrap();
        let target = hnp_target_vector(&inst, &key.d, &nonces);

        // Explicit combination: c_i = (t_i d + u_i - k_i) / n for the
        // modular rows, d for the t-row, 1 for the u-row.
        let m = inst.samples.len();
        let n_int = BigInt::from(curve.n.clone());
        let mut combo = vec![BigInt::zero(); m + 2];
        for i in 0..m {
            let (t, u) = &inst.samples[i];
            let excess = BigInt::from(t * &key.d + u) - BigInt::from(nonces[i].clone());
            let (quot, rem) = num_integer::Integer::div_rem(&excess, &n_int);
            assert!(rem.is_zero(), "k_i = u_i + t_i d mod n must hold");
            combo[i] = -quot;
        }
        combo[m] = BigInt::from(key.d.clone());
        combo[m + 1] = BigInt::one();
        let mut reconstructed = vec![BigInt::zero(); m + 2];
        for (coeff, row) in combo.iter().zip(&basis.rows) {
            for (dst, x) in reconstructed.iter_mut().zip(row) {
                *dst += coeff * x;
            }
        }
        assert_eq!(reconstructed, target, "target is an integer combination of the rows");

        // Norm below the Gaussian heuristic of the lattice.
        let norm2: f64 = target
            .iter()
            .map(|x| {
                let b: f64 = x.magnitude().bits() as f64;
                (2f64).powf(2.0 * b)
            })
            .sum();
        let dim = (m + 2) as f64;
        // det = (2^(z+1) n)^m * n; log2 of the GH bound
        let log2_n = curve.n.bits() as f64;
        let log2_det = (z as f64 + 1.0 + log2_n) * m as f64 + log2_n;
        let log2_gh = 0.5 * (dim / (2.0 * std::f64::consts::PI * std::f64::consts::E)).log2()
            + log2_det / dim;
        assert!(
            0.5 * norm2.log2() < log2_gh,
            "target must be shorter than the Gaussian heuristic: {} vs {}",
            0.5 * norm2.log2(),
            log2_gh
        );
    }
}
