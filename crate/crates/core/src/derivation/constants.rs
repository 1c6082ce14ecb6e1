//! Square classes of scalars.
//!
//! Case A scalars are rationals and get their 2-adic class. In Case B the
//! known constants are `-1`, `2`, `c`, the branch value of `3`, and the
//! classes of `c - k` for `k = 1..4`; a scalar is classified when it factors
//! into those up to a rational square.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::scalar::Scalar;
use crate::dyadic::rational_square_class;
use crate::error::DerivationError;
use crate::scenario::Scenario;
use crate::squareclass::SquareClass;

/// Class of `c - k` for `k = 0..=4`, as exponent bits.
pub fn c_minus_table(scenario: Scenario) -> Option<[u8; 5]> {
    let three = match scenario {
        Scenario::CaseA => return None,
        Scenario::CaseB3Is2 => 0b011,
        Scenario::CaseB3Is1 => 0b001,
    };
    // c ~ c, c-1 ~ 1, c-2 ~ -2, c-3 from the branch, c-4 ~ -1.
    Some([0b100, 0b000, 0b011, three, 0b001])
}

/// `Ok(None)` means the class is not determined by the constant table.
pub fn scalar_class(scenario: Scenario, s: &Scalar) -> Result<Option<SquareClass>, DerivationError> {
    if s.is_zero() {
        return Err(DerivationError::ZeroScalar);
    }
    Ok(scalar_bits(scenario, s).map(|b| scenario.group().class(b)))
}

pub(crate) fn scalar_bits(scenario: Scenario, s: &Scalar) -> Option<u8> {
    if s.is_zero() {
        return None;
    }
    match c_minus_table(scenario) {
        None => {
            let q = s.as_rational()?;
            rational_square_class(&q).ok().map(|c| c.bits())
        }
        Some(table) => {
            let mut rest = s.clone();
            let mut bits = 0u8;
            for (k, class) in table.iter().enumerate() {
                let root = BigRational::from_integer(BigInt::from(k));
                while rest.degree() > 0 && rest.eval(&root).is_zero() {
                    rest = rest.div_linear(&root);
                    bits ^= class;
                }
            }
            let q = rest.as_rational()?;
            Some(bits ^ case_b_rational(&q, table_three(scenario))?)
        }
    }
}

fn table_three(scenario: Scenario) -> u8 {
    scenario.three().bits()
}

// Rational class over <-1, 2, 3>; any other prime must occur to an even power.
fn case_b_rational(q: &BigRational, three: u8) -> Option<u8> {
    let mut bits = u8::from(q.is_negative());
    // Class of n/d equals class of n*d.
    let mut m: BigInt = (q.numer() * q.denom()).abs();
    let two = BigInt::from(2);
    let three_int = BigInt::from(3);
    while m.is_multiple_of(&two) {
        m /= &two;
        bits ^= 0b010;
    }
    while m.is_multiple_of(&three_int) {
        m /= &three_int;
        bits ^= three;
    }
    let r = m.sqrt();
    (&r * &r == m).then_some(bits)
}

/// Convenience for tests and tables: the class as a label.
pub fn scalar_label(scenario: Scenario, s: &Scalar) -> String {
    match scalar_class(scenario, s) {
        Ok(Some(c)) => c.label(),
        Ok(None) => "unknown".to_string(),
        Err(_) => "zero".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::parse::parse_scalar;

    fn label(sc: Scenario, s: &str) -> String {
        scalar_label(sc, &parse_scalar(s).unwrap())
    }

    #[test]
    fn case_a_examples() {
        assert_eq!(label(Scenario::CaseA, "3"), "-5");
        assert_eq!(label(Scenario::CaseA, "1/5"), "5");
        assert_eq!(label(Scenario::CaseA, "-3/2"), "10");
        assert_eq!(label(Scenario::CaseA, "12"), "-5");
        assert_eq!(label(Scenario::CaseA, "c"), "unknown");
        assert!(matches!(
            scalar_class(Scenario::CaseA, &Scalar::zero()),
            Err(DerivationError::ZeroScalar)
        ));
    }

    #[test]
    fn case_b_examples() {
        assert_eq!(label(Scenario::CaseB3Is2, "c-2"), "-2");
        assert_eq!(label(Scenario::CaseB3Is2, "c-3"), "-2");
        assert_eq!(label(Scenario::CaseB3Is1, "c-3"), "-1");
        assert_eq!(label(Scenario::CaseB3Is1, "c-4"), "-1");
        assert_eq!(label(Scenario::CaseB3Is1, "c-1"), "1");
        assert_eq!(label(Scenario::CaseB3Is2, "3"), "2");
        assert_eq!(label(Scenario::CaseB3Is1, "-3/2"), "-2");
        assert_eq!(label(Scenario::CaseB3Is1, "2c-6"), "-2");
        assert_eq!(label(Scenario::CaseB3Is1, "9/4"), "1");
        assert_eq!(label(Scenario::CaseB3Is1, "5"), "unknown");
        assert_eq!(label(Scenario::CaseB3Is1, "c-5"), "unknown");
        assert_eq!(label(Scenario::CaseB3Is2, "(c-1)*(c-2)"), "-2");
        assert_eq!(label(Scenario::CaseB3Is2, "-c"), "-c");
    }
}
