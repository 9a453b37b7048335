//! Depth-first branch-and-prune over low-bit factor candidates,
//! prioritized by the number of trace events each candidate verified.
//!
//! Candidates extend one bit of p and q at a time; of the four possible
//! bit assignments only those with `p*q = N (mod 2^(b+1))` survive, both
//! low bits are pinned to 1 (the primes are odd), candidates whose replay
//! contradicts the trace are discarded, and the rest are pushed when their
//! verified-step count reaches the depth-dependent threshold. The pop order
//! is (verified steps, then depth, then insertion order), so the search
//! follows the deepest best-corroborated candidate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::One;

use super::replay::TraceScore;

#[derive(Debug, Clone)]
pub struct Hypothesis {
    /// Trace events corroborated by this candidate.
    pub verified_steps: u64,
    /// Bits of p and q resolved.
    pub depth: u32,
    pub p_low: BigUint,
    pub q_low: BigUint,
    /// Guessed power i with gcd(p-1, q-1) = 2^i, where the search uses one.
    pub power: u32,
    seq: u64,
}

impl PartialEq for Hypothesis {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Hypothesis {}

impl PartialOrd for Hypothesis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hypothesis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.verified_steps
            .cmp(&other.verified_steps)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    pub pops: u64,
    pub pushes: u64,
    pub peak_queue: usize,
    pub pruned_congruence: u64,
    pub pruned_contradiction: u64,
    pub pruned_threshold: u64,
    /// Depth of the terminating candidate, when one was found.
    pub final_depth: u32,
}

/// Search lifecycle notifications for instrumented runs.
#[derive(Debug, Clone)]
pub enum SearchEvent {
    Popped { depth: u32, p_low: BigUint, q_low: BigUint, power: u32, steps: u64 },
    Pushed { depth: u32, p_low: BigUint, q_low: BigUint, power: u32, steps: u64 },
    Pruned { depth: u32, p_low: BigUint, q_low: BigUint, power: u32, reason: PruneReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    Congruence,
    /// p*q already exceeds N; bit extensions only grow the product.
    ProductBound,
    Contradiction,
    Threshold,
}

pub(crate) struct SearchSpec<'a> {
    pub n: &'a BigUint,
    /// One seed per guessed power (a single 0 for searches without one).
    pub powers: Vec<u32>,
    /// Score a candidate; `None` drops it before scoring (e.g. p*q > N).
    pub score: &'a dyn Fn(&BigUint, &BigUint, u32, u32) -> Option<TraceScore>,
    /// Minimum verified steps required to push at this (depth, power).
    pub threshold: &'a dyn Fn(u32, u32) -> u64,
    pub max_depth: u32,
}

pub(crate) fn branch_and_prune(
    spec: &SearchSpec<'_>,
    mut observer: Option<&mut dyn FnMut(SearchEvent)>,
) -> (Option<(BigUint, BigUint)>, SearchReport) {
    let mut report = SearchReport::default();
    let mut heap: BinaryHeap<Hypothesis> = BinaryHeap::new();
    let mut seq = 0u64;
    let one = BigUint::one();

    for &power in &spec.powers {
        let steps = match (spec.score)(&one, &one, 1, power) {
            Some(TraceScore::Verified(s)) => s,
            _ => continue,
        };
        heap.push(Hypothesis {
            verified_steps: steps,
            depth: 1,
            p_low: one.clone(),
            q_low: one.clone(),
            power,
            seq,
        });
        seq += 1;
        report.pushes += 1;
    }
    report.peak_queue = heap.len();

    while let Some(hyp) = heap.pop() {
        report.pops += 1;
        if let Some(obs) = observer.as_deref_mut() {
            obs(SearchEvent::Popped {
                depth: hyp.depth,
                p_low: hyp.p_low.clone(),
                q_low: hyp.q_low.clone(),
                power: hyp.power,
                steps: hyp.verified_steps,
            });
        }
        if &hyp.p_low * &hyp.q_low == *spec.n && hyp.p_low > one && hyp.q_low > one {
            report.final_depth = hyp.depth;
            return (Some((hyp.p_low, hyp.q_low)), report);
        }
        if hyp.depth > spec.max_depth {
            continue;
        }

        let b = hyp.depth;
        let bit = BigUint::one() << b;
        let modulus = BigUint::one() << (b + 1);
        let n_low = spec.n % &modulus;
        for (dp, dq) in [(false, false), (true, false), (false, true), (true, true)] {
            let p_s = if dp { &hyp.p_low + &bit } else { hyp.p_low.clone() };
            let q_s = if dq { &hyp.q_low + &bit } else { hyp.q_low.clone() };
            let prune = |reason: PruneReason,
                         observer: &mut Option<&mut dyn FnMut(SearchEvent)>,
                         report: &mut SearchReport| {
                match reason {
                    PruneReason::Congruence | PruneReason::ProductBound => {
                        report.pruned_congruence += 1
                    }
                    PruneReason::Contradiction => report.pruned_contradiction += 1,
                    PruneReason::Threshold => report.pruned_threshold += 1,
                }
                if let Some(obs) = observer.as_deref_mut() {
                    obs(SearchEvent::Pruned {
                        depth: b + 1,
                        p_low: p_s.clone(),
                        q_low: q_s.clone(),
                        power: hyp.power,
                        reason,
                    });
                }
            };

            if (&p_s * &q_s) % &modulus != n_low {
                prune(PruneReason::Congruence, &mut observer, &mut report);
                continue;
            }
            if &p_s * &q_s > *spec.n {
                prune(PruneReason::ProductBound, &mut observer, &mut report);
                continue;
            }
            match (spec.score)(&p_s, &q_s, b + 1, hyp.power) {
                None | Some(TraceScore::Contradiction) => {
                    prune(PruneReason::Contradiction, &mut observer, &mut report);
                }
                Some(TraceScore::Verified(steps)) => {
                    if steps < (spec.threshold)(b + 1, hyp.power) {
                        prune(PruneReason::Threshold, &mut observer, &mut report);
                        continue;
                    }
                    if let Some(obs) = observer.as_deref_mut() {
                        obs(SearchEvent::Pushed {
                            depth: b + 1,
                            p_low: p_s.clone(),
                            q_low: q_s.clone(),
                            power: hyp.power,
                            steps,
                        });
                    }
                    heap.push(Hypothesis {
                        verified_steps: steps,
                        depth: b + 1,
                        p_low: p_s,
                        q_low: q_s,
                        power: hyp.power,
                        seq,
                    });
                    seq += 1;
                    report.pushes += 1;
                    report.peak_queue = report.peak_queue.max(heap.len());
                }
            }
        }
    }
    (None, report)
}
