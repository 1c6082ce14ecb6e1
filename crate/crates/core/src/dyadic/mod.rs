//! Truncated 2-adic numbers: a valuation plus an odd unit known modulo
//! `2^k`. Every square class question in `Q_2` is decided by the unit
//! modulo 8 and the parity of the valuation.

mod construction;
mod oracle;
mod sample;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::DyadicError;
use crate::squareclass::{ClassGroup, SquareClass};

pub use construction::{
    classify_in_construction, closed_form_kind, verify_construction, ConstructionKind, ConstructionReport,
};
pub use oracle::{
    hilbert_matrix_search, hilbert_oracle, hilbert_oracle_with, hilbert_search, norm_classes_search,
    representative, sum_rule_soundness, SumRuleReport,
};
pub use sample::{eval_expr, sample_hypothesis, Assignment, SampleResult};

pub const DEFAULT_PRECISION: u32 = 64;
/// Units are held in a `u128`; a few bits are left for shifted addends.
pub const MAX_PRECISION: u32 = 120;

/// `2^v * u` with `u` odd and known modulo `2^k`. Zero has `u = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    v: i64,
    u: u128,
    k: u32,
}

fn mask(k: u32) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

fn check_precision(k: u32) -> Result<u32, DyadicError> {
    if k < 3 {
        Err(DyadicError::PrecisionExhausted)
    } else {
        Ok(k.min(MAX_PRECISION))
    }
}

/// Inverse of an odd `u` modulo `2^128` by Newton iteration.
fn odd_inverse(u: u128) -> u128 {
    let mut x = u;
    for _ in 0..7 {
        x = x.wrapping_mul(2u128.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

impl Dyadic {
    pub fn zero(k: u32) -> Self {
        Dyadic { v: 0, u: 0, k }
    }

    /// `2^v * u`; the unit is made odd by moving factors of two into `v`.
    pub fn new(v: i64, u: u128, k: u32) -> Result<Self, DyadicError> {
        let k = check_precision(k)?;
        let u = u & mask(k);
        if u == 0 {
            return Ok(Dyadic::zero(k));
        }
        let t = u.trailing_zeros();
        Ok(Dyadic { v: v + i64::from(t), u: u >> t, k: k - t }.checked()?)
    }

    fn checked(self) -> Result<Self, DyadicError> {
        if !self.is_zero() && self.k < 3 {
            Err(DyadicError::PrecisionExhausted)
        } else {
            Ok(self)
        }
    }

    pub fn from_int(n: i64, k: u32) -> Result<Self, DyadicError> {
        Dyadic::from_rational(&BigRational::from_integer(BigInt::from(n)), k)
    }

    pub fn from_rational(q: &BigRational, k: u32) -> Result<Self, DyadicError> {
        let k = check_precision(k)?;
        if q.is_zero() {
            return Ok(Dyadic::zero(k));
        }
        let (vn, n) = split_two(q.numer());
        let (vd, d) = split_two(q.denom());
        let modulus = BigInt::from(1u8) << k;
        let to_u128 = |x: &BigInt| x.mod_floor(&modulus).to_u128().expect("reduced below 2^k");
        let u = to_u128(&n).wrapping_mul(odd_inverse(to_u128(&d))) & mask(k);
        Ok(Dyadic { v: vn - vd, u, k })
    }

    /// Parses an integer or a fraction such as `-3/2`.
    pub fn parse(text: &str, k: u32) -> Result<Self, DyadicError> {
        Dyadic::from_rational(&parse_rational(text)?, k)
    }

    /// A random element with valuation in `vmin..=vmax` and a uniform unit.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, vmin: i64, vmax: i64, k: u32) -> Self {
        let k = k.clamp(3, MAX_PRECISION);
        let v = rng.random_range(vmin..=vmax);
        let u = (rng.random::<u128>() | 1) & mask(k);
        Dyadic { v, u, k }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.v)
    }

    pub fn unit(&self) -> u128 {
        self.u
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn neg(&self) -> Dyadic {
        if self.is_zero() {
            return *self;
        }
        Dyadic { v: self.v, u: self.u.wrapping_neg() & mask(self.k), k: self.k }
    }

    pub fn add(&self, other: &Dyadic) -> Result<Dyadic, DyadicError> {
        if self.is_zero() {
            return Ok(*other);
        }
        if other.is_zero() {
            return Ok(*self);
        }
        let v0 = self.v.min(other.v);
        let top = (self.v + i64::from(self.k)).min(other.v + i64::from(other.k));
        let r = (top - v0) as u32;
        let shifted = |d: &Dyadic| {
            let sh = d.v - v0;
            if sh >= i64::from(r) {
                0
            } else {
                d.u << sh
            }
        };
        let s = shifted(self).wrapping_add(shifted(other)) & mask(r);
        if s == 0 {
            return Err(DyadicError::PrecisionExhausted);
        }
        let t = s.trailing_zeros();
        Dyadic { v: v0 + i64::from(t), u: s >> t, k: r - t }.checked()
    }

    pub fn sub(&self, other: &Dyadic) -> Result<Dyadic, DyadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        let k = self.k.min(other.k);
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero(k);
        }
        Dyadic { v: self.v + other.v, u: self.u.wrapping_mul(other.u) & mask(k), k }
    }

    pub fn inv(&self) -> Result<Dyadic, DyadicError> {
        if self.is_zero() {
            return Err(DyadicError::DivisionByZero);
        }
        Ok(Dyadic { v: -self.v, u: odd_inverse(self.u) & mask(self.k), k: self.k })
    }

    pub fn div(&self, other: &Dyadic) -> Result<Dyadic, DyadicError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn square(&self) -> Dyadic {
        self.mul(self)
    }

    /// Multiplies by `2^e` exactly.
    pub fn shl(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return *self;
        }
        Dyadic { v: self.v + e, ..*self }
    }

    pub fn is_square(&self) -> Result<bool, DyadicError> {
        Ok(square_class_of(self)?.is_identity())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod 2^{})", self.k);
        }
        // Print the unit as a signed residue when that is shorter.
        let half = 1u128 << (self.k - 1);
        if self.u >= half {
            write!(f, "2^{} * -{} (mod 2^{})", self.v, (self.u.wrapping_neg()) & mask(self.k), self.k)
        } else {
            write!(f, "2^{} * {} (mod 2^{})", self.v, self.u, self.k)
        }
    }
}

fn split_two(n: &BigInt) -> (i64, BigInt) {
    let t = n.trailing_zeros().unwrap_or(0);
    (t as i64, n >> t)
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, DyadicError> {
    let bad = || DyadicError::BadRational(text.to_string());
    let t = text.trim().replace('−', "-");
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(DyadicError::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// Class in the Case A basis `(-1, 2, 5)`: the parity of `v` gives the `2`
/// bit and the unit modulo 8 gives the `-1` and `5` bits.
pub fn square_class_of(a: &Dyadic) -> Result<SquareClass, DyadicError> {
    if a.is_zero() {
        return Err(DyadicError::Zero);
    }
    if a.k < 3 {
        return Err(DyadicError::PrecisionExhausted);
    }
    let unit_bits = match a.u & 7 {
        1 => 0b000,
        3 => 0b101,
        5 => 0b100,
        _ => 0b001,
    };
    let two = if a.v.rem_euclid(2) == 1 { 0b010 } else { 0 };
    Ok(ClassGroup::CaseA.class(unit_bits | two))
}

pub fn is_square(a: &Dyadic) -> Result<bool, DyadicError> {
    a.is_square()
}

/// Exact 2-adic class of a nonzero rational.
pub fn rational_square_class(q: &BigRational) -> Result<SquareClass, DyadicError> {
    if q.is_zero() {
        return Err(DyadicError::Zero);
    }
    // Only the unit modulo 8 matters, so three bits of precision are exact.
    square_class_of(&Dyadic::from_rational(q, 3)?)
}

/// Ramification index and residue degree of `Q_2(sqrt a) / Q_2`.
pub fn quad_ext_invariants(a: SquareClass) -> Result<(u8, u8), DyadicError> {
    if a.is_identity() {
        return Err(DyadicError::TrivialClass);
    }
    // 5 is the only nontrivial class of a unit congruent to 1 mod 4.
    if a.bits() == 0b100 {
        Ok((1, 2))
    } else {
        Ok((2, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        Dyadic::parse(s, DEFAULT_PRECISION).unwrap()
    }

    fn class(s: &str) -> String {
        square_class_of(&d(s)).unwrap().label()
    }

    #[test]
    fn arithmetic_examples() {
        let p = d("2").mul(&d("6"));
        assert_eq!((p.valuation(), p.unit()), (Some(2), 3));
        let i = Dyadic::from_int(5, 6).unwrap().inv().unwrap();
        assert_eq!((i.valuation(), i.unit()), (Some(0), 13));
        let s = d("3").add(&d("5")).unwrap();
        assert_eq!((s.valuation(), s.unit()), (Some(3), 1));
        assert_eq!(s.precision(), 61);
        assert_eq!(d("0").inv(), Err(DyadicError::DivisionByZero));
        assert_eq!(d("7").add(&d("-7")), Err(DyadicError::PrecisionExhausted));
        assert_eq!(Dyadic::from_int(1, 2), Err(DyadicError::PrecisionExhausted));
        assert_eq!(d("1/3").mul(&d("3")), d("1"));
        assert_eq!(d("-3/2").neg(), d("3/2"));
    }

    #[test]
    fn squares() {
        assert!(d("17").is_square().unwrap());
        assert!(!d("2").is_square().unwrap());
        assert!(d("-7").is_square().unwrap());
        assert!(d("1/4").is_square().unwrap());
        assert_eq!(d("0").is_square(), Err(DyadicError::Zero));
    }

    #[test]
    fn class_examples() {
        assert_eq!(class("12"), "-5");
        assert_eq!(class("2"), "2");
        assert_eq!(class("1/5"), "5");
        assert_eq!(class("3"), "-5");
        assert_eq!(class("7"), "-1");
        assert_eq!(class("-10"), "-10");
        assert_eq!(class("-3/2"), "10");
    }

    #[test]
    fn quadratic_extensions() {
        let g = ClassGroup::CaseA;
        assert_eq!(quad_ext_invariants(g.parse("5").unwrap()), Ok((1, 2)));
        assert_eq!(quad_ext_invariants(g.parse("2").unwrap()), Ok((2, 1)));
        assert_eq!(quad_ext_invariants(g.parse("-10").unwrap()), Ok((2, 1)));
        assert_eq!(quad_ext_invariants(g.identity()), Err(DyadicError::TrivialClass));
    }

    #[test]
    fn cancellation_loses_precision() {
        let a = Dyadic::from_int(1, 10).unwrap();
        let b = Dyadic::from_int(-1 + 256, 10).unwrap();
        assert_eq!(a.add(&b), Err(DyadicError::PrecisionExhausted));
        let c = Dyadic::from_int(-1 + 64, 10).unwrap();
        let s = a.add(&c).unwrap();
        assert_eq!((s.valuation(), s.precision()), (Some(6), 4));
    }
}
