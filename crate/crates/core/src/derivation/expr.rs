//! Formal polynomial expressions in the unknowns `x`, `y`, `x'`, ... with
//! [`Scalar`] coefficients, and quotients of them for identity checks.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use super::scalar::Scalar;

/// An unknown: a letter plus a number of primes (`x`, `x'`, `y''`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: char,
    pub primes: u8,
}

impl Atom {
    pub const fn new(name: char) -> Self {
        Atom { name, primes: 0 }
    }

    pub fn primed(self) -> Self {
        Atom { name: self.name, primes: self.primes + 1 }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for _ in 0..self.primes {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// A product of atom powers, sorted by atom. The empty product is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// No atom is raised above the first power.
    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, e)), Some(&(b, f))) => match a.cmp(&b) {
                    Ordering::Less => {
                        out.push((a, e));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((b, f));
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((a, e + f));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&p), None) => {
                    out.push(p);
                    i += 1;
                }
                (None, Some(&p)) => {
                    out.push(p);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().map(|&(a, _)| a)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (a, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{a}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial: monomials mapped to nonzero scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn constant(s: Scalar) -> Self {
        Expr::term(s, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Scalar::from_int(n))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(Scalar::one(), Monomial::atom(a))
    }

    pub fn var(name: char) -> Self {
        Expr::atom(Atom::new(name))
    }

    pub fn term(s: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(m, s);
        }
        Expr { terms }
    }

    /// `1 + k * m` for a scalar `k` and an expression `m`.
    pub fn one_plus(k: Scalar, m: &Expr) -> Self {
        Expr::int(1) + m.scale(&k)
    }

    /// Parses the textual syntax, e.g. `1 + 5x`, `1 - x*y`, `1+(c-1)x`.
    pub fn parse(text: &str) -> Result<Expr, crate::error::ParseError> {
        super::parse::parse_expr(text)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar value, when the expression has no unknowns.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// The single atom, when the expression is exactly one bare unknown.
    pub fn as_atom(&self) -> Option<Atom> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, s) = self.terms.iter().next()?;
        (s.is_one() && m.factors().len() == 1 && m.factors()[0].1 == 1).then(|| m.factors()[0].0)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(Monomial::is_multilinear)
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self.terms.keys().flat_map(|m| m.atoms().collect::<Vec<_>>()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                let sum = &*c + &s;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(m, s);
            }
        }
    }

    /// Replaces an atom by an expression.
    pub fn substitute(&self, a: Atom, by: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m, s) in &self.terms {
            let mut rest = Monomial::one();
            let mut power = 0;
            for &(b, e) in m.factors() {
                if b == a {
                    power = e;
                } else {
                    rest = rest.mul(&Monomial(vec![(b, e)]));
                }
            }
            let mut t = Expr::term(s.clone(), rest);
            for _ in 0..power {
                t = &t * by;
            }
            out = out + t;
        }
        out
    }
}

impl Add for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, s) in &rhs.terms {
            out.add_term(m.clone(), s.clone());
        }
        out
    }
}

impl Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        &self + &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(m, s)| (m.clone(), -s)).collect() }
    }
}

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        -&self
    }
}

impl Sub for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Mul for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, s1) in &self.terms {
            for (m2, s2) in &rhs.terms {
                out.add_term(m1.mul(m2), s1 * s2);
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        // Fewer terms and lower degree first, then term by term.
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.terms.len().cmp(&other.terms.len()))
            .then_with(|| self.terms.iter().cmp(other.terms.iter()))
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, s)) in self.terms.iter().enumerate() {
            let compound = s.is_compound();
            let neg = if compound { false } else { s.is_negative_leading() };
            let mag = if neg { -s } else { s.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coeff = if compound { format!("({mag})") } else { mag.to_string() };
            if m.is_one() {
                f.write_str(&coeff)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A quotient of two expressions, used only for identity checking.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: Expr,
    pub den: Expr,
}

impl RatFunc {
    pub fn new(num: Expr, den: Expr) -> Self {
        RatFunc { num, den }
    }

    pub fn parse(text: &str) -> Result<RatFunc, crate::error::ParseError> {
        super::parse::parse_ratfunc(text)
    }

    /// The polynomial, when the denominator is a nonzero constant.
    pub fn as_expr(&self) -> Option<Expr> {
        let d = self.den.as_constant()?;
        let q = d.as_rational()?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.scale(&Scalar::from_rational(q.recip())))
    }

    pub fn div(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl From<Expr> for RatFunc {
    fn from(e: Expr) -> Self {
        RatFunc::new(e, Expr::int(1))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc::new(-&self.num, self.den.clone())
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|s| s.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Whether `lhs - rhs` is the zero rational function.
///
/// Cross-multiplies and compares polynomials exactly; a zero denominator on
/// either side makes the comparison false.
pub fn verify_identity(lhs: &RatFunc, rhs: &RatFunc) -> bool {
    if lhs.den.is_zero() || rhs.den.is_zero() {
        return false;
    }
    (&lhs.num * &rhs.den - &rhs.num * &lhs.den).is_zero()
}

/// Whether `scalar * target == u * p + v * q` holds as polynomials.
pub fn verify_linear(scalar: &Scalar, target: &Expr, u: &Scalar, p: &Expr, v: &Scalar, q: &Expr) -> bool {
    (target.scale(scalar) - p.scale(u) - q.scale(v)).is_zero()
}

pub(crate) fn product(factors: &[Expr]) -> Expr {
    factors.iter().fold(Expr::constant(Scalar::one()), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn canonical_display() {
        assert_eq!(e("5x+1").to_string(), "1 + 5*x");
        assert_eq!(e("1 - y*x").to_string(), "1 - x*y");
        assert_eq!(e("1+(c-1)*x").to_string(), "1 + (c-1)*x");
        assert_eq!(e("1 - x/5").to_string(), "1 - 1/5*x");
        assert_eq!(e("a^2 - 2 + x").to_string(), "-2 + x + a^2");
        assert_eq!(e("x'").to_string(), "x'");
    }

    #[test]
    fn equality_is_canonical() {
        assert_eq!(e("1+2x"), e("(1+x)+x"));
        assert_eq!(e("(1+x)*(1-x)"), e("1 - x^2"));
        assert_ne!(e("1+x"), e("1-x"));
    }

    #[test]
    fn identities() {
        let lhs = RatFunc::parse("(1+x)*(1-2x/(1+x))").unwrap();
        assert!(verify_identity(&lhs, &RatFunc::parse("1-x").unwrap()));
        let lhs = RatFunc::parse("(1+x)*(1+4x/(1+x))").unwrap();
        assert!(verify_identity(&lhs, &RatFunc::parse("1+5x").unwrap()));
        assert!(!verify_identity(&RatFunc::parse("1+x").unwrap(), &RatFunc::parse("1-x").unwrap()));
    }

    #[test]
    fn substitution() {
        let t = e("1 - x*y");
        assert_eq!(t.substitute(Atom::new('x'), &e("2y")), e("1 - 2y^2"));
    }
}
