//! Trace-driven replay of the inversion victims with one unknown operand.
//!
//! The replay mirrors the victim's control flow but takes every branch
//! outcome from the trace: comparison and sign outcomes are consumed as
//! given, parity outcomes are turned into bit constraints (and checks)
//! against the linear forms of the current state.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use crate::victims::{BranchEvent, BranchTrace, Variant};

use super::form::{BitSolver, Form};
use super::RecoverError;

pub struct Replay {
    pub solver: BitSolver,
}

pub fn replay_trace(trace: &BranchTrace, modulus: &BigUint) -> Result<Replay, RecoverError> {
    match trace.variant {
        Variant::CompactBeea => replay_beea(trace, modulus, true),
        Variant::FullBeea => replay_beea(trace, modulus, false),
        Variant::AlgX => replay_algx(trace, modulus),
        other => Err(RecoverError::UnsupportedVariant(other)),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum LoopCtx {
    U,
    V,
}

/// Facts implied by an odd-adjust flag on an accumulator pair, given the
/// parities of the two original operands. At a halving the pair satisfies
/// `a*u + b*v = even`, so the flag collapses to definite parities of both.
fn pair_flag_facts(
    solver: &mut BitSolver,
    a: &Form,
    b: &Form,
    u_odd: bool,
    v_odd: bool,
    adjust: bool,
    event: usize,
) -> Result<(), RecoverError> {
    match (u_odd, v_odd) {
        // a and b share parity; the flag names it.
        (true, true) => {
            solver.observe_parity(a, adjust, event)?;
            solver.observe_parity(b, adjust, event)?;
        }
        // u even: b is always even at a halving, the flag names a's parity.
        (false, true) => {
            solver.observe_parity(b, false, event)?;
            solver.observe_parity(a, adjust, event)?;
        }
        // v even: a is always even, the flag names b's parity.
        (true, false) => {
            solver.observe_parity(a, false, event)?;
            solver.observe_parity(b, adjust, event)?;
        }
        (false, false) => unreachable!("operands cannot both be even"),
    }
    Ok(())
}

fn replay_beea(
    trace: &BranchTrace,
    modulus: &BigUint,
    compact: bool,
) -> Result<Replay, RecoverError> {
    let mut solver = BitSolver::new();
    let m = BigInt::from(modulus.clone());
    let v_odd = modulus.is_odd();

    // Compact layout starts with u_i at the (odd, known) modulus and v_i at
    // the unknown value; the full layout is the other way around.
    let (mut ui, mut vi) = if compact {
        (Form::known_of(m.clone()), Form::unknown())
    } else {
        (Form::unknown(), Form::known_of(m.clone()))
    };
    let mut a = Form::known_of(BigInt::one()); // unused in compact
    let mut b = Form::known_of(BigInt::from(0));
    let mut c = Form::known_of(BigInt::from(0)); // unused in compact
    let mut d = Form::known_of(BigInt::one());

    // Parity of the unknown operand from the solver's point of view: for
    // the compact layout the unknown sits in v_i and the subtracted-known
    // quantity is the odd modulus, so accumulator flags are single parities
    // and the operand parity never enters; for the full layout the first
    // loop-boundary fact always pins bit 0 before any flag is decomposed.
    let mut ctx = LoopCtx::U;
    let unknown_odd = |solver: &BitSolver| -> bool {
        debug_assert!(solver.resolved >= 1, "operand parity must be pinned first");
        solver.low.bit(0)
    };

    for (idx, &ev) in trace.events.iter().enumerate() {
        match ev {
            BranchEvent::UHalvePlain | BranchEvent::UHalveAdjust => {
                if ctx == LoopCtx::V {
                    return Err(RecoverError::InconsistentTrace { event: idx });
                }
                let adjust = ev == BranchEvent::UHalveAdjust;
                solver.observe_parity(&ui, false, idx)?;
                if compact {
                    solver.observe_parity(&b, adjust, idx)?;
                    if adjust {
                        b.add_known(&-&m);
                    }
                } else {
                    let u_odd = unknown_odd(&solver);
                    pair_flag_facts(&mut solver, &a, &b, u_odd, v_odd, adjust, idx)?;
                    if adjust {
                        a.add_known(&m);
                        b.sub_unknown();
                    }
                    a.halve();
                }
                ui.halve();
                b.halve();
                solver.note_halving();
            }
            BranchEvent::VHalvePlain | BranchEvent::VHalveAdjust => {
                if ctx == LoopCtx::U {
                    solver.observe_parity(&ui, true, idx)?; // u-loop exit
                    ctx = LoopCtx::V;
                }
                let adjust = ev == BranchEvent::VHalveAdjust;
                solver.observe_parity(&vi, false, idx)?;
                if compact {
                    solver.observe_parity(&d, adjust, idx)?;
                    if adjust {
                        d.add_known(&-&m);
                    }
                } else {
                    let u_odd = unknown_odd(&solver);
                    pair_flag_facts(&mut solver, &c, &d, u_odd, v_odd, adjust, idx)?;
                    if adjust {
                        c.add_known(&m);
                        d.sub_unknown();
                    }
                    c.halve();
                }
                vi.halve();
                d.halve();
                solver.note_halving();
            }
            BranchEvent::CmpS1 | BranchEvent::CmpS2 => {
                if ctx == LoopCtx::U {
                    solver.observe_parity(&ui, true, idx)?; // u-loop exit
                }
                solver.observe_parity(&vi, true, idx)?; // v-loop exit
                if ev == BranchEvent::CmpS1 {
                    ui = ui.sub(&vi);
                    b = b.sub(&d);
                    if !compact {
                        a = a.sub(&c);
                    }
                } else {
                    vi = vi.sub(&ui);
                    d = d.sub(&b);
                    if !compact {
                        c = c.sub(&a);
                    }
                }
                ctx = LoopCtx::U;
            }
            other => {
                return Err(RecoverError::ForeignEvent { event: idx, kind: other });
            }
        }
        solver.snapshot();
    }
    Ok(Replay { solver })
}

#[derive(Clone, Copy, PartialEq)]
enum AlgxExpect {
    HalveOrSign,
    T1Flag,
}

fn replay_algx(trace: &BranchTrace, modulus: &BigUint) -> Result<Replay, RecoverError> {
    let mut solver = BitSolver::new();
    let m = BigInt::from(modulus.clone());
    let v_odd = modulus.is_odd();

    let mut events = trace.events.iter().enumerate();
    let (mut t1, mut t2, mut t3);
    match events.next() {
        Some((idx, BranchEvent::InitUOdd)) => {
            solver.observe_parity(&Form::unknown(), true, idx)?;
            t1 = Form::known_of(BigInt::from(0));
            t2 = Form::known_of(BigInt::from(-1));
            t3 = Form::known_of(-&m);
        }
        Some((idx, BranchEvent::InitUEven)) => {
            solver.observe_parity(&Form::unknown(), false, idx)?;
            t1 = Form::known_of(BigInt::one());
            t2 = Form::known_of(BigInt::from(0));
            t3 = Form::unknown();
        }
        Some((idx, _)) => return Err(RecoverError::InconsistentTrace { event: idx }),
        None => return Ok(Replay { solver }),
    }
    let mut u1 = Form::known_of(BigInt::one());
    let mut u2 = Form::known_of(BigInt::from(0));
    let mut u3 = Form::unknown();
    let mut v1 = Form::known_of(m.clone());
    let mut v2 = Form::known_of(BigInt::one()).sub(&Form::unknown());
    let mut v3 = Form::known_of(m.clone());

    let mut expect = AlgxExpect::HalveOrSign;
    let u_odd = solver.low.bit(0);

    for (idx, &ev) in events {
        match ev {
            BranchEvent::T3HalvePlain | BranchEvent::T3HalveAdjust => {
                if expect != AlgxExpect::HalveOrSign {
                    return Err(RecoverError::InconsistentTrace { event: idx });
                }
                let adjust = ev == BranchEvent::T3HalveAdjust;
                solver.observe_parity(&t3, false, idx)?;
                pair_flag_facts(&mut solver, &t1, &t2, u_odd, v_odd, adjust, idx)?;
                if adjust {
                    t1.add_known(&m);
                    t2.sub_unknown();
                }
                t1.halve();
                t2.halve();
                t3.halve();
                solver.note_halving();
            }
            BranchEvent::T3Pos | BranchEvent::T3Neg => {
                if expect != AlgxExpect::HalveOrSign {
                    return Err(RecoverError::InconsistentTrace { event: idx });
                }
                solver.observe_parity(&t3, true, idx)?; // inner loop exit
                if ev == BranchEvent::T3Pos {
                    u1 = t1.clone();
                    u2 = t2.clone();
                    u3 = t3.clone();
                } else {
                    v1 = Form::known_of(m.clone()).sub(&t1);
                    v2 = Form::unknown().neg().sub(&t2);
                    v3 = t3.neg();
                }
                t1 = u1.sub(&v1);
                t2 = u2.sub(&v2);
                t3 = u3.sub(&v3);
                expect = AlgxExpect::T1Flag;
            }
            BranchEvent::T1NegAdjust | BranchEvent::T1Nonneg => {
                if expect != AlgxExpect::T1Flag {
                    return Err(RecoverError::InconsistentTrace { event: idx });
                }
                if ev == BranchEvent::T1NegAdjust {
                    t1.add_known(&m);
                    t2.sub_unknown();
                }
                expect = AlgxExpect::HalveOrSign;
            }
            other => return Err(RecoverError::ForeignEvent { event: idx, kind: other }),
        }
        solver.snapshot();
    }
    Ok(Replay { solver })
}
