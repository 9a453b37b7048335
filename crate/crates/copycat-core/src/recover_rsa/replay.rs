//! Hypothesis scoring: replay a victim over the low-bit window of a
//! candidate and count how many trace events the window can corroborate.
//!
//! Parity-driven events are checked against the tracked values; comparison,
//! sign and swap outcomes are consumed from the trace. Scoring stops at the
//! first event whose required parity falls outside the window (precision
//! exhausted) and returns the number of events verified up to that point; a
//! determinable mismatch is a contradiction.

use crate::victims::{BranchEvent, BranchTrace, Variant};

use super::tracked::{odd_or, Tracked};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceScore {
    Verified(u64),
    Contradiction,
}

impl TraceScore {
    pub fn verified(self) -> Option<u64> {
        match self {
            TraceScore::Verified(n) => Some(n),
            TraceScore::Contradiction => None,
        }
    }
}

/// Outcome of checking one expected parity against a tracked value.
enum Check {
    Ok,
    Exhausted,
    Mismatch,
}

fn check_parity(t: &Tracked, expect_odd: bool) -> Check {
    match t.parity() {
        None => Check::Exhausted,
        Some(p) if p == expect_odd => Check::Ok,
        Some(_) => Check::Mismatch,
    }
}

fn check_flag(actual: Option<bool>, expect: bool) -> Check {
    match actual {
        None => Check::Exhausted,
        Some(p) if p == expect => Check::Ok,
        Some(_) => Check::Mismatch,
    }
}

macro_rules! verify {
    ($check:expr, $count:expr) => {
        match $check {
            Check::Ok => {}
            Check::Exhausted => return TraceScore::Verified($count),
            Check::Mismatch => return TraceScore::Contradiction,
        }
    };
}

/// Replay the straightforward inversion victim on (value, modulus) known
/// over their windows.
pub fn score_beea_full(trace: &BranchTrace, value: &Tracked, modulus: &Tracked) -> TraceScore {
    debug_assert_eq!(trace.variant, Variant::FullBeea);
    let mut ui = value.clone();
    let mut vi = modulus.clone();
    let mut a = Tracked::exact(1.into());
    let mut b = Tracked::exact(0.into());
    let mut c = Tracked::exact(0.into());
    let mut d = Tracked::exact(1.into());

    #[derive(PartialEq, Clone, Copy)]
    enum Ctx {
        U,
        V,
    }
    let mut ctx = Ctx::U;
    let mut count = 0u64;

    for ev in &trace.events {
        match ev {
            BranchEvent::UHalvePlain | BranchEvent::UHalveAdjust => {
                if ctx == Ctx::V {
                    return TraceScore::Contradiction;
                }
                let adjust = *ev == BranchEvent::UHalveAdjust;
                verify!(check_parity(&ui, false), count);
                verify!(check_flag(odd_or(a.parity(), b.parity()), adjust), count);
                if adjust {
                    a = a.add(modulus);
                    b = b.sub(value);
                }
                if !(ui.halve() && a.halve() && b.halve()) {
                    return TraceScore::Contradiction;
                }
            }
            BranchEvent::VHalvePlain | BranchEvent::VHalveAdjust => {
                if ctx == Ctx::U {
                    verify!(check_parity(&ui, true), count);
                    ctx = Ctx::V;
                }
                let adjust = *ev == BranchEvent::VHalveAdjust;
                verify!(check_parity(&vi, false), count);
                verify!(check_flag(odd_or(c.parity(), d.parity()), adjust), count);
                if adjust {
                    c = c.add(modulus);
                    d = d.sub(value);
                }
                if !(vi.halve() && c.halve() && d.halve()) {
                    return TraceScore::Contradiction;
                }
            }
            BranchEvent::CmpS1 | BranchEvent::CmpS2 => {
                if ctx == Ctx::U {
                    verify!(check_parity(&ui, true), count);
                }
                verify!(check_parity(&vi, true), count);
                if *ev == BranchEvent::CmpS1 {
                    ui = ui.sub(&vi);
                    a = a.sub(&c);
                    b = b.sub(&d);
                } else {
                    vi = vi.sub(&ui);
                    c = c.sub(&a);
                    d = d.sub(&b);
                }
                ctx = Ctx::U;
            }
            _ => return TraceScore::Contradiction,
        }
        count += 1;
    }
    TraceScore::Verified(count)
}

/// Replay the Knuth-style inversion victim on (value, modulus) known over
/// their windows.
pub fn score_algx(trace: &BranchTrace, value: &Tracked, modulus: &Tracked) -> TraceScore {
    debug_assert_eq!(trace.variant, Variant::AlgX);
    let mut count = 0u64;
    let mut events = trace.events.iter();

    let (mut t1, mut t2, mut t3);
    match events.next() {
        Some(BranchEvent::InitUOdd) => {
            verify!(check_parity(value, true), count);
            t1 = Tracked::exact(0.into());
            t2 = Tracked::exact((-1).into());
            t3 = modulus.neg();
        }
        Some(BranchEvent::InitUEven) => {
            verify!(check_parity(value, false), count);
            t1 = Tracked::exact(1.into());
            t2 = Tracked::exact(0.into());
            t3 = value.clone();
        }
        Some(_) => return TraceScore::Contradiction,
        None => return TraceScore::Verified(0),
    }
    count += 1;

    let mut u1 = Tracked::exact(1.into());
    let mut u2 = Tracked::exact(0.into());
    let mut u3 = value.clone();
    let mut v1 = modulus.clone();
    let mut v2 = Tracked::exact(1.into()).sub(value);
    let mut v3 = modulus.clone();

    #[derive(PartialEq, Clone, Copy)]
    enum Expect {
        HalveOrSign,
        T1Flag,
    }
    let mut expect = Expect::HalveOrSign;

    for ev in events {
        match ev {
            BranchEvent::T3HalvePlain | BranchEvent::T3HalveAdjust => {
                if expect != Expect::HalveOrSign {
                    return TraceScore::Contradiction;
                }
                let adjust = *ev == BranchEvent::T3HalveAdjust;
                verify!(check_parity(&t3, false), count);
                verify!(check_flag(odd_or(t1.parity(), t2.parity()), adjust), count);
                if adjust {
                    t1 = t1.add(modulus);
                    t2 = t2.sub(value);
                }
                if !(t1.halve() && t2.halve() && t3.halve()) {
                    return TraceScore::Contradiction;
                }
            }
            BranchEvent::T3Pos | BranchEvent::T3Neg => {
                if expect != Expect::HalveOrSign {
                    return TraceScore::Contradiction;
                }
                verify!(check_parity(&t3, true), count);
                if *ev == BranchEvent::T3Pos {
                    u1 = t1.clone();
                    u2 = t2.clone();
                    u3 = t3.clone();
                } else {
                    v1 = modulus.sub(&t1);
                    v2 = value.neg().sub(&t2);
                    v3 = t3.neg();
                }
                t1 = u1.sub(&v1);
                t2 = u2.sub(&v2);
                t3 = u3.sub(&v3);
                expect = Expect::T1Flag;
            }
            BranchEvent::T1NegAdjust | BranchEvent::T1Nonneg => {
                if expect != Expect::T1Flag {
                    return TraceScore::Contradiction;
                }
                if *ev == BranchEvent::T1NegAdjust {
                    t1 = t1.add(modulus);
                    t2 = t2.sub(value);
                }
                expect = Expect::HalveOrSign;
            }
            _ => return TraceScore::Contradiction,
        }
        count += 1;
    }
    TraceScore::Verified(count)
}

/// Replay the binary GCD victim on (a, b) known over their windows. Swap
/// events are consumed (the comparison depends on high bits); parity-case
/// events are checked.
pub fn score_bgcd(trace: &BranchTrace, a0: &Tracked, b0: &Tracked) -> TraceScore {
    debug_assert_eq!(trace.variant, Variant::OpensslGcd);
    let mut a = a0.clone();
    let mut b = b0.clone();
    let mut count = 0u64;
    let mut events = trace.events.iter();

    // Initial swap outcome.
    match events.next() {
        Some(BranchEvent::GcdSwap) => std::mem::swap(&mut a, &mut b),
        Some(BranchEvent::GcdNoswap) => {}
        Some(_) => return TraceScore::Contradiction,
        None => return TraceScore::Verified(0),
    }
    count += 1;

    let mut pending_swap = false;
    for ev in events {
        if pending_swap {
            match ev {
                BranchEvent::GcdSwap => std::mem::swap(&mut a, &mut b),
                BranchEvent::GcdNoswap => {}
                _ => return TraceScore::Contradiction,
            }
            pending_swap = false;
            count += 1;
            continue;
        }
        match ev {
            BranchEvent::GcdOo => {
                verify!(check_parity(&a, true), count);
                verify!(check_parity(&b, true), count);
                a = a.sub(&b);
                if !a.halve() {
                    return TraceScore::Contradiction;
                }
                pending_swap = true;
            }
            BranchEvent::GcdOe => {
                verify!(check_parity(&a, true), count);
                verify!(check_parity(&b, false), count);
                if !b.halve() {
                    return TraceScore::Contradiction;
                }
                pending_swap = true;
            }
            BranchEvent::GcdEo => {
                verify!(check_parity(&a, false), count);
                verify!(check_parity(&b, true), count);
                if !a.halve() {
                    return TraceScore::Contradiction;
                }
                pending_swap = true;
            }
            BranchEvent::GcdEe => {
                verify!(check_parity(&a, false), count);
                verify!(check_parity(&b, false), count);
                if !(a.halve() && b.halve()) {
                    return TraceScore::Contradiction;
                }
            }
            _ => return TraceScore::Contradiction,
        }
        count += 1;
    }
    TraceScore::Verified(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::victims::{beea_full, openssl_bgcd};
    use num_bigint::BigInt;

    #[test]
    fn ground_truth_low_bits_verify_monotonically() {
        // Trace of q^-1 mod p for p=5, q=7 (N = 35).
        let (_, trace) = beea_full(&7u32.into(), &5u32.into()).unwrap();
        let mut last = 0;
        for bits in 1..=4u32 {
            let q = Tracked::low_bits(BigInt::from(7 % (1 << bits)), bits);
            let p = Tracked::low_bits(BigInt::from(5 % (1 << bits)), bits);
            match score_beea_full(&trace, &q, &p) {
                TraceScore::Verified(n) => {
                    assert!(n >= last, "verified count must not shrink");
                    last = n;
                }
                TraceScore::Contradiction => panic!("ground truth contradicted at {bits} bits"),
            }
        }
        assert_eq!(last, trace.len() as u64, "full window verifies everything");
    }

    #[test]
    fn corrupted_low_bit_contradicts() {
        let (_, trace) = beea_full(&1234577u32.into(), &1048583u32.into()).unwrap();
        // Correct low bits verify; flipping bit 1 of the value contradicts.
        let good = Tracked::low_bits(BigInt::from(1234577 & 0xffff), 16);
        let modw = Tracked::low_bits(BigInt::from(1048583 & 0xffff), 16);
        assert!(matches!(score_beea_full(&trace, &good, &modw), TraceScore::Verified(_)));
        let bad = Tracked::low_bits(BigInt::from((1234577 ^ 2) & 0xffff), 16);
        assert_eq!(score_beea_full(&trace, &bad, &modw), TraceScore::Contradiction);
    }

    #[test]
    fn seed_hypothesis_scores_nonzero() {
        let (_, trace) = beea_full(&7u32.into(), &5u32.into()).unwrap();
        let one = Tracked::low_bits(BigInt::from(1), 1);
        match score_beea_full(&trace, &one.clone(), &one) {
            TraceScore::Verified(n) => assert!(n > 0, "seed must verify the leading events"),
            TraceScore::Contradiction => panic!("seed hypothesis (1,1) cannot contradict"),
        }
    }

    #[test]
    fn bgcd_ground_truth_verifies() {
        let (_, trace) = openssl_bgcd(&1048582u32.into(), &999998u32.into()).unwrap();
        let a = Tracked::low_bits(BigInt::from(1048582 & 0xfff), 12);
        let b = Tracked::low_bits(BigInt::from(999998 & 0xfff), 12);
        assert!(matches!(score_bgcd(&trace, &a, &b), TraceScore::Verified(n) if n > 12));
        let bad = Tracked::low_bits(BigInt::from((1048582 ^ 4) & 0xfff), 12);
        assert_eq!(score_bgcd(&trace, &bad, &b), TraceScore::Contradiction);
    }
}
