//! Exact scalars: polynomials in the constant `c` with rational coefficients.
//!
//! Case A scalars are plain rationals (degree 0). Case B needs expressions
//! such as `c - 3`; products of those stay polynomials, which keeps the
//! arithmetic closed under the Cramer solves done by the engine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// `sum_i coeffs[i] * c^i`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::from_coeffs(vec![q])
    }

    /// The constant `c`.
    pub fn c() -> Self {
        Scalar::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c - k`.
    pub fn c_minus(k: i64) -> Self {
        Scalar::c() - Scalar::from_int(k)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|q| q.is_zero()) {
            coeffs.pop();
        }
        Scalar { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `c`; zero has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The rational value, when the scalar does not involve `c`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for q in self.coeffs.iter().rev() {
            acc = acc * at + q;
        }
        acc
    }

    /// Floating-point value with `c` replaced by `at`.
    pub fn approx(&self, at: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, q| acc * at + q.to_f64().unwrap_or(f64::NAN))
    }

    /// Quotient by `c - k`, assuming it divides exactly.
    pub fn div_linear(&self, k: &BigRational) -> Scalar {
        // Synthetic division from the top coefficient down.
        let n = self.coeffs.len();
        if n <= 1 {
            return Scalar::zero();
        }
        let mut out = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * k;
            out[i - 1] = carry.clone();
        }
        Scalar::from_coeffs(out)
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar::from_coeffs(self.coeffs.iter().map(|a| a * q).collect())
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading().is_some_and(|q| q.is_negative())
    }

    fn fmt_rational(q: &BigRational) -> String {
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    /// Whether printing needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        self.coeffs.iter().filter(|q| !q.is_zero()).count() > 1
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, q) in self.coeffs.iter().enumerate().rev() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => f.write_str(&Scalar::fmt_rational(&mag))?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", Scalar::fmt_rational(&mag))?;
                    }
                    f.write_str("c")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Scalar::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar { coeffs: self.coeffs.iter().map(|q| -q).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Scalar::from_coeffs(out)
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Scalar::c_minus(3);
        let b = Scalar::c_minus(1);
        let p = &a * &b;
        assert_eq!(p.to_string(), "c^2-4*c+3");
        assert_eq!((&p - &p), Scalar::zero());
        assert_eq!(p.div_linear(&BigRational::from_integer(3.into())), b);
        assert_eq!(p.eval(&BigRational::from_integer(1.into())), BigRational::zero());
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::from_ratio(-1, 5).to_string(), "-1/5");
        assert_eq!(Scalar::c_minus(1).to_string(), "c-1");
        assert_eq!((-Scalar::c()).to_string(), "-c");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
