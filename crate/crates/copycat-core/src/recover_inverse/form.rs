//! Exact linear bookkeeping for the bit-by-bit replay.
//!
//! Every internal value of the replayed victim is represented as
//! `(coeff * u + known) / 2^halved` with exact integer `coeff` and `known`,
//! where `u` is the unknown operand. Halving a (provably even) value just
//! bumps the exponent, so the form stays exact for the true `u` across the
//! whole execution. Each parity the trace reveals about a value becomes a
//! constraint on one bit of `coeff * u + known`; solved LSB-first these
//! constraints pin the bits of `u`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::RecoverError;

/// value = (coeff * u + known) / 2^halved, exactly over the integers.
#[derive(Debug, Clone)]
pub struct Form {
    pub coeff: BigInt,
    pub known: BigInt,
    pub halved: u32,
}

impl Form {
    pub fn known_of(c: BigInt) -> Form {
        Form { coeff: BigInt::zero(), known: c, halved: 0 }
    }

    pub fn unknown() -> Form {
        Form { coeff: BigInt::one(), known: BigInt::zero(), halved: 0 }
    }

    /// value += c
    pub fn add_known(&mut self, c: &BigInt) {
        self.known += c << self.halved;
    }

    /// value -= u
    pub fn sub_unknown(&mut self) {
        self.coeff -= BigInt::one() << self.halved;
    }

    /// value /= 2 (caller has established the value is even)
    pub fn halve(&mut self) {
        self.halved += 1;
    }

    /// self - other, exponents aligned to the larger.
    pub fn sub(&self, other: &Form) -> Form {
        let e = self.halved.max(other.halved);
        Form {
            coeff: (&self.coeff << (e - self.halved)) - (&other.coeff << (e - other.halved)),
            known: (&self.known << (e - self.halved)) - (&other.known << (e - other.halved)),
            halved: e,
        }
    }

    pub fn neg(&self) -> Form {
        Form { coeff: -&self.coeff, known: -&self.known, halved: self.halved }
    }

    /// The parity constraint "this value is odd/even" as a fact on bit
    /// `halved` of `coeff * u + known`.
    fn parity_fact(&self, odd: bool, event: usize) -> Fact {
        Fact {
            coeff: self.coeff.clone(),
            known: self.known.clone(),
            bit: self.halved,
            odd,
            event,
        }
    }
}

/// One parity observation: bit `bit` of `coeff * u + known` equals `odd`.
#[derive(Debug, Clone)]
struct Fact {
    coeff: BigInt,
    known: BigInt,
    bit: u32,
    odd: bool,
    event: usize,
}

fn bit_at(x: &BigInt, bit: u32) -> bool {
    let m = BigInt::one() << (bit + 1);
    let r = x.mod_floor(&m).to_biguint().expect("mod_floor is non-negative");
    r.bit(bit as u64)
}

enum FactOutcome {
    Checked,
    ResolvedBit,
    Deferred(Fact),
}

/// LSB-first bit solver over the unknown operand.
#[derive(Debug)]
pub struct BitSolver {
    /// Low bits of `u` recovered so far.
    pub low: BigUint,
    /// Number of recovered bits.
    pub resolved: u64,
    pending: Vec<Fact>,
    /// Halving events consumed, for instrumentation.
    pub halvings: u64,
    /// (halvings, resolved) after each consumed event.
    pub trajectory: Vec<(u64, u64)>,
}

impl BitSolver {
    pub fn new() -> BitSolver {
        BitSolver {
            low: BigUint::zero(),
            resolved: 0,
            pending: Vec::new(),
            halvings: 0,
            trajectory: Vec::new(),
        }
    }

    pub fn bit(&self, i: u64) -> Option<bool> {
        (i < self.resolved).then(|| self.low.bit(i))
    }

    pub fn note_halving(&mut self) {
        self.halvings += 1;
    }

    pub fn snapshot(&mut self) {
        self.trajectory.push((self.halvings, self.resolved));
    }

    /// Record that the value described by `form` has the given parity.
    pub fn observe_parity(
        &mut self,
        form: &Form,
        odd: bool,
        event: usize,
    ) -> Result<(), RecoverError> {
        let fact = form.parity_fact(odd, event);
        match self.try_fact(fact)? {
            FactOutcome::Deferred(f) => self.pending.push(f),
            FactOutcome::ResolvedBit => self.drain_pending()?,
            FactOutcome::Checked => {}
        }
        Ok(())
    }

    fn drain_pending(&mut self) -> Result<(), RecoverError> {
        loop {
            let mut progressed = false;
            let mut still = Vec::with_capacity(self.pending.len());
            for fact in std::mem::take(&mut self.pending) {
                match self.try_fact(fact)? {
                    FactOutcome::Deferred(f) => still.push(f),
                    FactOutcome::ResolvedBit => progressed = true,
                    FactOutcome::Checked => {}
                }
            }
            self.pending = still;
            if !progressed {
                return Ok(());
            }
        }
    }

    fn try_fact(&mut self, fact: Fact) -> Result<FactOutcome, RecoverError> {
        let low = BigInt::from(self.low.clone());
        // Bits of u needed to evaluate bit `bit` of coeff*u + known.
        let needed = if fact.coeff.is_zero() {
            0
        } else {
            let val2 = fact.coeff.trailing_zeros().expect("nonzero") as u32;
            (fact.bit + 1).saturating_sub(val2) as u64
        };
        if needed <= self.resolved {
            let got = bit_at(&(&fact.coeff * &low + &fact.known), fact.bit);
            if got == fact.odd {
                Ok(FactOutcome::Checked)
            } else {
                Err(RecoverError::InconsistentTrace { event: fact.event })
            }
        } else if needed == self.resolved + 1 {
            let base = bit_at(&(&fact.coeff * &low + &fact.known), fact.bit);
            if fact.odd != base {
                self.low.set_bit(self.resolved, true);
            }
            self.resolved += 1;
            Ok(FactOutcome::ResolvedBit)
        } else {
            Ok(FactOutcome::Deferred(fact))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_bits_lsb_first() {
        // u = 0b1011; feed parities of u, u>>1 (after halving), etc.
        let mut solver = BitSolver::new();
        let mut f = Form::unknown();
        solver.observe_parity(&f, true, 0).unwrap(); // bit0 = 1
        f.known -= BigInt::one(); // value = u - 1, even
        f.halve();
        solver.observe_parity(&f, true, 1).unwrap(); // bit1 = 1
        f.known -= BigInt::from(2);
        f.halve();
        solver.observe_parity(&f, false, 2).unwrap(); // bit2 = 0
        f.halve();
        solver.observe_parity(&f, true, 3).unwrap(); // bit3 = 1
        assert_eq!(solver.resolved, 4);
        assert_eq!(solver.low, BigUint::from(0b1011u32));
    }

    #[test]
    fn deferred_facts_resolve_after_lower_bits_arrive() {
        // First fact speaks about bit 1, second about bit 0.
        let mut solver = BitSolver::new();
        let deep = Form { coeff: BigInt::one(), known: BigInt::zero(), halved: 1 };
        solver.observe_parity(&deep, true, 0).unwrap();
        assert_eq!(solver.resolved, 0);
        solver.observe_parity(&Form::unknown(), false, 1).unwrap(); // bit0 = 0
        assert_eq!(solver.resolved, 2);
        assert_eq!(solver.low, BigUint::from(0b10u32));
    }

    #[test]
    fn contradiction_reports_event_index() {
        let mut solver = BitSolver::new();
        solver.observe_parity(&Form::unknown(), true, 7).unwrap();
        let f = Form::unknown(); // same value, opposite parity claim
        match solver.observe_parity(&f, false, 8) {
            Err(RecoverError::InconsistentTrace { event }) => assert_eq!(event, 8),
            other => panic!("expected contradiction, got {other:?}"),
        }
    }
}
