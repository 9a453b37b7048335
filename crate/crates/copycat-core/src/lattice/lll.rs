//! Lattice basis reduction with all-integer Gram–Schmidt bookkeeping (the
//! de Weger representation: subdeterminants d_i and scaled coefficients
//! lambda_{i,j} = d_j * mu_{i,j}). Deterministic across platforms — no
//! floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LatticeBasis, LatticeError};

/// Reduction parameter delta as an exact rational in (1/4, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delta {
    pub num: u32,
    pub den: u32,
}

impl Delta {
    pub fn new(num: u32, den: u32) -> Result<Delta, LatticeError> {
        if den == 0 || 4 * num <= den || num >= den {
            return Err(LatticeError::BadDelta);
        }
        Ok(Delta { num, den })
    }

    /// The default: delta = 99/100, strong reduction at these dimensions.
    pub fn strong() -> Delta {
        Delta { num: 99, den: 100 }
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL-reduce `basis` in place semantics (rows span the same lattice).
/// Rows must be linearly independent.
pub fn lll_reduce(basis: &LatticeBasis, delta: Delta) -> Result<LatticeBasis, LatticeError> {
    let mut b = basis.rows.clone();
    let n = b.len();
    if n == 0 {
        return Ok(LatticeBasis { rows: b });
    }

    // d[0] = 1, d[i+1] = det Gram(b_0..b_i); lambda[i][j] = d[j+1] * mu_ij.
    let mut d: Vec<BigInt> = vec![BigInt::one(); n + 1];
    let mut lambda: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot(&b[i], &b[j]);
            for k in 0..j {
                u = (&d[k + 1] * &u - &lambda[i][k] * &lambda[j][k]) / &d[k];
            }
            if j < i {
                lambda[i][j] = u;
            } else {
                if u.is_zero() || u.is_negative() {
                    return Err(LatticeError::RankDeficient);
                }
                d[i + 1] = u;
            }
        }
    }

    let num = BigInt::from(delta.num);
    let den = BigInt::from(delta.den);

    // |mu_{k,l}| <= 1/2, i.e. 2|lambda| <= d[l+1].
    let size_reduce = |k: usize,
                       l: usize,
                       b: &mut Vec<Vec<BigInt>>,
                       lambda: &mut Vec<Vec<BigInt>>,
                       d: &[BigInt]| {
        let twice: BigInt = &lambda[k][l] * 2;
        if twice.magnitude() > d[l + 1].magnitude() {
            // q = round(lambda / d), exact nearest integer
            let two_l: BigInt = &lambda[k][l] * 2;
            let two_d: BigInt = &d[l + 1] * 2;
            let q = (two_l + &d[l + 1]).div_floor(&two_d);
            if !q.is_zero() {
                let scaled: Vec<BigInt> = b[l].iter().map(|x| x * &q).collect();
                for (dst, s) in b[k].iter_mut().zip(scaled) {
                    *dst -= s;
                }
                lambda[k][l] -= &q * &d[l + 1];
                for i in 0..l {
                    let t = &q * &lambda[l][i];
                    lambda[k][i] -= t;
                }
            }
        }
    };

    let mut k = 1usize;
    while k < n {
        size_reduce(k, k - 1, &mut b, &mut lambda, &d);
        // Lovász: delta * |b*_{k-1}|^2 <= |b*_k|^2 + mu^2 |b*_{k-1}|^2,
        // in integers: num * d[k]^2 <= den * (d[k+1] d[k-1] + lambda^2).
        let lhs = &num * &d[k] * &d[k];
        let rhs = &den * (&d[k + 1] * &d[k - 1] + &lambda[k][k - 1] * &lambda[k][k - 1]);
        if lhs > rhs {
            // Swap rows k-1 and k, fix the integral GS data.
            b.swap(k - 1, k);
            for j in 0..k.saturating_sub(1) {
                let t = lambda[k][j].clone();
                lambda[k][j] = lambda[k - 1][j].clone();
                lambda[k - 1][j] = t;
            }
            let bar = lambda[k][k - 1].clone();
            let new_dk = (&d[k - 1] * &d[k + 1] + &bar * &bar) / &d[k];
            for i in k + 1..n {
                let t = lambda[i][k].clone();
                lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &bar * &t) / &d[k];
                lambda[i][k - 1] = (&new_dk * &t + &bar * &lambda[i][k]) / &d[k + 1];
            }
            d[k] = new_dk;
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(k, l, &mut b, &mut lambda, &d);
            }
            k += 1;
        }
    }
    Ok(LatticeBasis { rows: b })
}

/// Exact rational Gram–Schmidt of the rows.
fn gram_schmidt(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> =
            rows[i].iter().map(|x| BigRational::from(x.clone())).collect();
        for j in 0..i {
            let denom: BigRational = star[j].iter().map(|x| x * x).sum();
            let numer: BigRational = rows[i]
                .iter()
                .zip(&star[j])
                .map(|(x, y)| BigRational::from(x.clone()) * y)
                .sum();
            let m_ij = numer / denom;
            for t in 0..m {
                let s = &m_ij * &star[j][t];
                v[t] -= s;
            }
            mu[i][j] = m_ij;
        }
        star.push(v);
    }
    (star, mu)
}

/// Independent post-condition verifier: size reduction and the Lovász
/// condition, checked with exact rational arithmetic rather than by
/// trusting the reducer's bookkeeping.
pub fn check_reduction(basis: &LatticeBasis, delta: Delta) -> Result<(), LatticeError> {
    let rows = &basis.rows;
    let (star, mu) = gram_schmidt(rows);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..rows.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return Err(LatticeError::NotSizeReduced { row: i, col: j });
            }
        }
    }
    let delta_q = BigRational::new(BigInt::from(delta.num), BigInt::from(delta.den));
    for k in 1..rows.len() {
        let prev: BigRational = star[k - 1].iter().map(|x| x * x).sum();
        let this: BigRational = star[k].iter().map(|x| x * x).sum();
        let bound = (&delta_q - &mu[k][k - 1] * &mu[k][k - 1]) * &prev;
        if this < bound {
            return Err(LatticeError::LovaszViolated { row: k });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(rows: Vec<Vec<i64>>) -> LatticeBasis {
        LatticeBasis {
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        }
    }

    #[test]
    fn identity_is_already_reduced() {
        let id = basis(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let out = lll_reduce(&id, Delta::strong()).unwrap();
        assert_eq!(out.rows, id.rows);
        check_reduction(&out, Delta::strong()).unwrap();
    }

    #[test]
    fn two_dim_reduction_finds_the_short_vector() {
        // Gauss reduction of ((1,0),(99,1)) scaled by 1000: the shortest
        // vector is (1000, 0).
        let scale = 1000i64;
        let b = basis(vec![vec![scale, 0], vec![99 * scale, scale]]);
        let out = lll_reduce(&b, Delta::strong()).unwrap();
        check_reduction(&out, Delta::strong()).unwrap();
        let short = &out.rows[0];
        let norm2: BigInt = short.iter().map(|x| x * x).sum();
        assert_eq!(norm2, BigInt::from(scale) * scale);
        assert!(short[1].is_zero());
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let b = basis(vec![vec![2, 4], vec![1, 2]]);
        assert_eq!(lll_reduce(&b, Delta::strong()), Err(LatticeError::RankDeficient));
    }

    #[test]
    fn random_basis_passes_postconditions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(40);
        for _ in 0..3 {
            let dim = 40;
            let rows: Vec<Vec<BigInt>> = (0..dim)
                .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-1000i64..1000))).collect())
                .collect();
            let b = LatticeBasis { rows };
            match lll_reduce(&b, Delta::strong()) {
                Ok(out) => check_reduction(&out, Delta::strong()).unwrap(),
                Err(LatticeError::RankDeficient) => {} // unlucky draw
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn preserves_the_lattice() {
        // The reduced rows must be integer combinations of the originals
        // and vice versa (equal absolute determinants).
        let b = basis(vec![vec![7, 2, 3], vec![1, 8, 1], vec![2, 2, 9]]);
        let out = lll_reduce(&b, Delta::strong()).unwrap();
        let det = |m: &Vec<Vec<BigInt>>| -> BigInt {
            // 3x3 determinant
            let a = &m[0];
            let b_ = &m[1];
            let c = &m[2];
            (&a[0] * (&b_[1] * &c[2] - &b_[2] * &c[1]))
                - (&a[1] * (&b_[0] * &c[2] - &b_[2] * &c[0]))
                + (&a[2] * (&b_[0] * &c[1] - &b_[1] * &c[0]))
        };
        assert_eq!(det(&b.rows).abs(), det(&out.rows).abs());
    }
}
