//! Low-bit windowed values for hypothesis replay.
//!
//! A [`Tracked`] value is known either exactly or modulo `2^bits`. The
//! accounting implements the window rules of the search: one window bit is
//! spent per halving, adding or subtracting an exactly-known quantity
//! spends nothing, and an operation mixing two windowed values narrows to
//! the smaller window.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Window {
    Bits(u32),
    Exact,
}

impl Window {
    fn narrower(self, other: Window) -> Window {
        self.min(other)
    }

    fn has_parity(self) -> bool {
        !matches!(self, Window::Bits(0))
    }
}

#[derive(Debug, Clone)]
pub struct Tracked {
    /// Exact signed value, or the residue in [0, 2^bits).
    value: BigInt,
    pub window: Window,
}

impl Tracked {
    pub fn exact(value: BigInt) -> Tracked {
        Tracked { value, window: Window::Exact }
    }

    /// A value known only modulo 2^bits.
    pub fn low_bits(value: BigInt, bits: u32) -> Tracked {
        let mut t = Tracked { value, window: Window::Bits(bits) };
        t.reduce();
        t
    }

    fn reduce(&mut self) {
        if let Window::Bits(w) = self.window {
            self.value = self.value.mod_floor(&(BigInt::from(1) << w));
        }
    }

    /// None when the window is empty.
    pub fn parity(&self) -> Option<bool> {
        self.window.has_parity().then(|| self.value.is_odd())
    }

    pub fn is_zero_exact(&self) -> bool {
        self.window == Window::Exact && self.value.is_zero()
    }

    pub fn add(&self, other: &Tracked) -> Tracked {
        let mut t = Tracked {
            value: &self.value + &other.value,
            window: self.window.narrower(other.window),
        };
        t.reduce();
        t
    }

    pub fn sub(&self, other: &Tracked) -> Tracked {
        let mut t = Tracked {
            value: &self.value - &other.value,
            window: self.window.narrower(other.window),
        };
        t.reduce();
        t
    }

    pub fn neg(&self) -> Tracked {
        let mut t = Tracked { value: -&self.value, window: self.window };
        t.reduce();
        t
    }

    /// Divide by two, spending one window bit. Returns false when the value
    /// is determinately odd — the victim would never halve it, so the
    /// hypothesis contradicts the trace.
    #[must_use]
    pub fn halve(&mut self) -> bool {
        match self.window {
            Window::Exact => {
                if self.value.is_odd() {
                    return false;
                }
                self.value /= 2;
            }
            Window::Bits(0) => {}
            Window::Bits(w) => {
                if self.value.is_odd() {
                    return false;
                }
                self.value /= 2;
                self.window = Window::Bits(w - 1);
            }
        }
        true
    }
}

/// Three-valued disjunction over optional parities, mirroring a victim's
/// `isOdd(x) || isOdd(y)` condition on windowed values.
pub fn odd_or(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_narrows_on_mixing_and_spends_on_halving() {
        let a = Tracked::low_bits(BigInt::from(0b1011), 4);
        let b = Tracked::exact(BigInt::from(100));
        let sum = a.add(&b);
        assert_eq!(sum.window, Window::Bits(4));
        assert_eq!(sum.parity(), Some(true)); // 11 + 100 odd

        let c = Tracked::low_bits(BigInt::from(0b10), 2);
        let mixed = a.sub(&c);
        assert_eq!(mixed.window, Window::Bits(2));

        let mut h = Tracked::low_bits(BigInt::from(0b1010), 4);
        assert!(h.halve());
        assert_eq!(h.window, Window::Bits(3));
        assert_eq!(h.parity(), Some(true)); // 0b101
        assert!(!h.halve()); // odd: the victim would never halve this
    }

    #[test]
    fn empty_window_has_no_parity() {
        let t = Tracked::low_bits(BigInt::from(7), 0);
        assert_eq!(t.parity(), None);
    }

    #[test]
    fn negative_values_reduce_into_the_window() {
        let t = Tracked::low_bits(BigInt::from(-3), 4);
        assert_eq!(t.parity(), Some(true)); // -3 mod 16 = 13
    }
}
