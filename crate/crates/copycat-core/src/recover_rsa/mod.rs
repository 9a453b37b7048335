//! Branch-and-prune factorization of an RSA modulus from a single trace of
//! one key-generation inversion or GCD:
//!
//! * `q^-1 mod p` — both operands secret, constrained by `p*q = N` and the
//!   trace;
//! * `e^-1 mod lambda(N)` — the modulus is secret and related to the
//!   factors through a guessed power `gcd(p-1, q-1) = 2^i`;
//! * `gcd(p-1, q-1)` — the binary-GCD parity cases constrain both factors;
//! * the masked variant `(e r)^-1 mod lambda(N)`, which reduces to the
//!   second attack when the mask is known and to a joint search over the
//!   mask's bits when only its coprimality-check trace is available.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::victims::{BranchTrace, Variant};

mod replay;
mod search;
mod tracked;

pub use replay::TraceScore;
pub use search::{Hypothesis, PruneReason, SearchEvent, SearchReport};
pub use tracked::{Tracked, Window};

use replay::{score_algx, score_beea_full, score_bgcd};
use search::{branch_and_prune, SearchSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    /// Queue exhausted: the trace does not belong to this modulus.
    NotFound,
    /// The trace variant has no replay engine for this attack.
    WrongVariant(Variant),
    /// N must be an odd composite.
    InvalidModulus,
    /// Masked attack with unknown mask needs the gcd trace.
    MissingGcdTrace,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::NotFound => write!(f, "search exhausted without finding the factors"),
            SearchError::WrongVariant(v) => write!(f, "no replay engine for {v} in this attack"),
            SearchError::InvalidModulus => write!(f, "modulus must be odd and composite"),
            SearchError::MissingGcdTrace => {
                write!(f, "mask is unknown and no coprimality-check trace was supplied")
            }
        }
    }
}

impl std::error::Error for SearchError {}

/// Outcome of the lambda-trace attacks, where failure is a defined result:
/// the search gives up when gcd(p-1, q-1) has an odd factor, i.e. is not a
/// power of two within the guessed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DFactorOutcome {
    Factors(BigUint, BigUint),
    Fail,
}

/// Score a CRT-trace hypothesis: replay the inversion victim with value
/// `q_low` and modulus `p_low`, both known over `bits` low bits.
pub fn crt_hypothesis_score(
    trace: &BranchTrace,
    p_low: &BigUint,
    q_low: &BigUint,
    bits: u32,
) -> Result<TraceScore, SearchError> {
    let value = Tracked::low_bits(BigInt::from(q_low.clone()), bits);
    let modulus = Tracked::low_bits(BigInt::from(p_low.clone()), bits);
    match trace.variant {
        Variant::FullBeea => Ok(score_beea_full(trace, &value, &modulus)),
        Variant::AlgX => Ok(score_algx(trace, &value, &modulus)),
        other => Err(SearchError::WrongVariant(other)),
    }
}

/// Score a lambda-trace hypothesis: replay with the fully known exponent
/// and the modulus candidate known over `window` low bits.
pub fn lambda_hypothesis_score(
    trace: &BranchTrace,
    lambda_low: &BigUint,
    window: u32,
    e: &BigUint,
) -> Result<TraceScore, SearchError> {
    let value = Tracked::exact(BigInt::from(e.clone()));
    let modulus = Tracked::low_bits(BigInt::from(lambda_low.clone()), window);
    match trace.variant {
        Variant::FullBeea => Ok(score_beea_full(trace, &value, &modulus)),
        Variant::AlgX => Ok(score_algx(trace, &value, &modulus)),
        other => Err(SearchError::WrongVariant(other)),
    }
}

fn check_target(n: &BigUint) -> Result<(), SearchError> {
    if n.is_even() || *n <= BigUint::from(3u32) {
        return Err(SearchError::InvalidModulus);
    }
    Ok(())
}

/// Factor N from a trace of the CRT-parameter inversion `q^-1 mod p`.
pub fn recover_pq_from_crt_trace(
    trace: &BranchTrace,
    n: &BigUint,
) -> Result<(BigUint, BigUint), SearchError> {
    recover_pq_from_crt_trace_instrumented(trace, n, None).map(|(f, _)| f)
}

pub fn recover_pq_from_crt_trace_instrumented(
    trace: &BranchTrace,
    n: &BigUint,
    observer: Option<&mut dyn FnMut(SearchEvent)>,
) -> Result<((BigUint, BigUint), SearchReport), SearchError> {
    check_target(n)?;
    if !matches!(trace.variant, Variant::FullBeea | Variant::AlgX) {
        return Err(SearchError::WrongVariant(trace.variant));
    }
    let score = |p_s: &BigUint, q_s: &BigUint, bits: u32, _power: u32| {
        Some(crt_hypothesis_score(trace, p_s, q_s, bits).expect("variant checked"))
    };
    let threshold = |depth: u32, _power: u32| depth as u64 + 1;
    let spec = SearchSpec {
        n,
        powers: vec![0],
        score: &score,
        threshold: &threshold,
        max_depth: n.bits() as u32 + 1,
    };
    let (found, report) = branch_and_prune(&spec, observer);
    found.map(|f| (f, report)).ok_or(SearchError::NotFound)
}

fn lambda_candidate(
    p_s: &BigUint,
    q_s: &BigUint,
    depth: u32,
    power: u32,
) -> Option<(BigUint, u32)> {
    let mask = (BigUint::one() << depth) - 1u32;
    let phi = ((p_s - 1u32) * (q_s - 1u32)) &
        &mask;
    let checkable = power.min(depth);
    if !(&phi & ((BigUint::one() << checkable) - 1u32)).is_zero() {
        return None;
    }
    if depth > power {
        Some((phi >> power, depth - power))
    } else {
        Some((BigUint::zero(), 0))
    }
}

/// Factor N from a trace of the private-exponent inversion
/// `e^-1 mod lambda(N)`, guessing `gcd(p-1, q-1) = 2^i` for i up to
/// `l_max`. Returns [`DFactorOutcome::Fail`] when no guess works — the gcd
/// then has an odd factor.
pub fn recover_pq_from_d_trace(
    trace: &BranchTrace,
    e: &BigUint,
    n: &BigUint,
    l_max: u32,
) -> Result<DFactorOutcome, SearchError> {
    recover_pq_from_d_trace_instrumented(trace, e, n, l_max, None).map(|(o, _)| o)
}

pub fn recover_pq_from_d_trace_instrumented(
    trace: &BranchTrace,
    e: &BigUint,
    n: &BigUint,
    l_max: u32,
    observer: Option<&mut dyn FnMut(SearchEvent)>,
) -> Result<(DFactorOutcome, SearchReport), SearchError> {
    check_target(n)?;
    if !matches!(trace.variant, Variant::FullBeea | Variant::AlgX) {
        return Err(SearchError::WrongVariant(trace.variant));
    }
    let score = |p_s: &BigUint, q_s: &BigUint, bits: u32, power: u32| {
        if p_s * q_s > *n {
            return None;
        }
        let (lambda_low, window) = lambda_candidate(p_s, q_s, bits, power)?;
        Some(lambda_hypothesis_score(trace, &lambda_low, window, e).expect("variant checked"))
    };
    let threshold = |depth: u32, power: u32| (depth as u64).saturating_sub(power as u64);
    let spec = SearchSpec {
        n,
        powers: (1..=l_max).collect(),
        score: &score,
        threshold: &threshold,
        max_depth: n.bits() as u32 + 1,
    };
    let (found, report) = branch_and_prune(&spec, observer);
    Ok((
        found.map_or(DFactorOutcome::Fail, |(p, q)| DFactorOutcome::Factors(p, q)),
        report,
    ))
}

/// Factor N from a trace of the binary GCD over (p-1, q-1), as computed by
/// X9.31-style key derivation.
pub fn recover_pq_from_gcd_trace(
    trace: &BranchTrace,
    n: &BigUint,
) -> Result<(BigUint, BigUint), SearchError> {
    recover_pq_from_gcd_trace_instrumented(trace, n, None).map(|(f, _)| f)
}

pub fn recover_pq_from_gcd_trace_instrumented(
    trace: &BranchTrace,
    n: &BigUint,
    observer: Option<&mut dyn FnMut(SearchEvent)>,
) -> Result<((BigUint, BigUint), SearchReport), SearchError> {
    check_target(n)?;
    if trace.variant != Variant::OpensslGcd {
        return Err(SearchError::WrongVariant(trace.variant));
    }
    let score = |p_s: &BigUint, q_s: &BigUint, bits: u32, _power: u32| {
        let a = Tracked::low_bits(BigInt::from(p_s - 1u32), bits);
        let b = Tracked::low_bits(BigInt::from(q_s - 1u32), bits);
        Some(score_bgcd(trace, &a, &b))
    };
    let threshold = |depth: u32, _power: u32| depth as u64 + 1;
    let spec = SearchSpec {
        n,
        powers: vec![0],
        score: &score,
        threshold: &threshold,
        max_depth: n.bits() as u32 + 1,
    };
    let (found, report) = branch_and_prune(&spec, observer);
    found.map(|f| (f, report)).ok_or(SearchError::NotFound)
}

/// Knowledge about the masking factor applied to the public exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaskedExponent {
    /// The masked exponent `e*r` itself is known (hard-coded mask, or no
    /// mask at all — the search is size-agnostic in the exponent).
    Known(BigUint),
    /// Only `e` is known; the mask must be recovered from the trace of its
    /// coprimality check `gcd(r, lambda(N))`.
    Unknown { e: BigUint },
}

/// The lambda-trace attack against masked exponents. With a known mask this
/// is exactly [`recover_pq_from_d_trace`] on `e*r`; with an unknown mask the
/// gcd trace joins the search and the mask's bits are guessed alongside the
/// factor bits.
pub fn masked_d_attack(
    trace_b: &BranchTrace,
    trace_gcd: Option<&BranchTrace>,
    exponent: MaskedExponent,
    n: &BigUint,
    l_max: u32,
) -> Result<DFactorOutcome, SearchError> {
    match exponent {
        MaskedExponent::Known(er) => recover_pq_from_d_trace(trace_b, &er, n, l_max),
        MaskedExponent::Unknown { e } => {
            let gcd_trace = trace_gcd.ok_or(SearchError::MissingGcdTrace)?;
            joint_masked_search(trace_b, gcd_trace, &e, n, l_max)
        }
    }
}

/// Joint branch-and-prune over (p, q, r): the gcd(r, lambda) trace scores
/// the mask bits, the (e r)^-1 trace scores the factor bits through the
/// masked exponent. The mask is odd (it is coprime to the even lambda).
fn joint_masked_search(
    trace_b: &BranchTrace,
    trace_gcd: &BranchTrace,
    e: &BigUint,
    n: &BigUint,
    l_max: u32,
) -> Result<DFactorOutcome, SearchError> {
    use std::collections::BinaryHeap;
    check_target(n)?;
    if !matches!(trace_b.variant, Variant::FullBeea | Variant::AlgX) {
        return Err(SearchError::WrongVariant(trace_b.variant));
    }
    if trace_gcd.variant != Variant::OpensslGcd {
        return Err(SearchError::WrongVariant(trace_gcd.variant));
    }

    #[derive(PartialEq, Eq)]
    struct Joint {
        steps: u64,
        depth: u32,
        p: BigUint,
        q: BigUint,
        r: BigUint,
        power: u32,
        seq: u64,
    }
    impl Ord for Joint {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.steps
                .cmp(&other.steps)
                .then(self.depth.cmp(&other.depth))
                .then(other.seq.cmp(&self.seq))
        }
    }
    impl PartialOrd for Joint {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let score = |p_s: &BigUint, q_s: &BigUint, r_s: &BigUint, depth: u32, power: u32| -> Option<u64> {
        if p_s * q_s > *n {
            return None;
        }
        let (lambda_low, window) = lambda_candidate(p_s, q_s, depth, power)?;
        let lambda_t = Tracked::low_bits(BigInt::from(lambda_low.clone()), window);
        let mask = (BigUint::one() << depth) - 1u32;
        let er_low = (e * r_s) & &mask;
        let er_t = Tracked::low_bits(BigInt::from(er_low), depth);
        let d_score = match trace_b.variant {
            Variant::FullBeea => score_beea_full(trace_b, &er_t, &lambda_t),
            Variant::AlgX => score_algx(trace_b, &er_t, &lambda_t),
            _ => unreachable!(),
        };
        let r_t = Tracked::low_bits(BigInt::from(r_s.clone()), depth);
        let g_score = score_bgcd(trace_gcd, &r_t, &lambda_t);
        let floor = (depth as u64).saturating_sub(power as u64);
        match (d_score.verified(), g_score.verified()) {
            (Some(ds), Some(gs)) if ds >= floor && gs >= floor => Some(ds + gs),
            _ => None,
        }
    };

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let one = BigUint::one();
    for power in 1..=l_max {
        if let Some(steps) = score(&one, &one, &one, 1, power) {
            heap.push(Joint {
                steps,
                depth: 1,
                p: one.clone(),
                q: one.clone(),
                r: one.clone(),
                power,
                seq,
            });
            seq += 1;
        }
    }
    let max_depth = n.bits() as u32 + 1;
    while let Some(hyp) = heap.pop() {
        if &hyp.p * &hyp.q == *n && hyp.p > one && hyp.q > one {
            return Ok(DFactorOutcome::Factors(hyp.p, hyp.q));
        }
        if hyp.depth > max_depth {
            continue;
        }
        let b = hyp.depth;
        let bit = BigUint::one() << b;
        let modulus = BigUint::one() << (b + 1);
        let n_low = n % &modulus;
        for sel in 0u8..8 {
            let p_s = if sel & 1 != 0 { &hyp.p + &bit } else { hyp.p.clone() };
            let q_s = if sel & 2 != 0 { &hyp.q + &bit } else { hyp.q.clone() };
            let r_s = if sel & 4 != 0 { &hyp.r + &bit } else { hyp.r.clone() };
            if (&p_s * &q_s) % &modulus != n_low {
                continue;
            }
            if let Some(steps) = score(&p_s, &q_s, &r_s, b + 1, hyp.power) {
                heap.push(Joint {
                    steps,
                    depth: b + 1,
                    p: p_s,
                    q: q_s,
                    r: r_s,
                    power: hyp.power,
                    seq,
                });
                seq += 1;
            }
        }
    }
    Ok(DFactorOutcome::Fail)
}
