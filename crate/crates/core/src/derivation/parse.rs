//! Recursive-descent parser for expression text.
//!
//! Grammar: sums of products of powers, with `+ - * / ^`, parentheses,
//! implicit multiplication (`5xy`, `2(1+x)`), single-letter unknowns with
//! optional primes, and the reserved constant `c`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::expr::{Atom, Expr, RatFunc};
use super::scalar::Scalar;
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(Atom),
    C,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        match ch {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Num(digits.parse().expect("ascii digits"))));
                i = j;
                continue;
            }
            'c' => out.push((pos, Tok::C)),
            'a'..='z' | 'A'..='Z' => {
                let mut atom = Atom::new(ch);
                while i + 1 < chars.len() && matches!(chars[i + 1].1, '\'' | '\u{2032}') {
                    atom = atom.primed();
                    i += 1;
                }
                out.push((pos, Tok::Ident(atom)));
            }
            '+' => out.push((pos, Tok::Plus)),
            '-' | '\u{2212}' => out.push((pos, Tok::Minus)),
            '*' | '\u{00b7}' | '\u{00d7}' => out.push((pos, Tok::Star)),
            '/' => out.push((pos, Tok::Slash)),
            '^' => out.push((pos, Tok::Caret)),
            '(' => out.push((pos, Tok::LParen)),
            ')' => out.push((pos, Tok::RParen)),
            _ => return Err(ParseError::UnexpectedChar { ch, pos }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(usize::MAX)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn sum(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.unary()?;
                    if d.num.is_zero() {
                        return Err(ParseError::BadDivision);
                    }
                    acc = acc.div(&d);
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::C | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let n = match self.bump() {
                Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| ParseError::BadExponent)?,
                _ => return Err(ParseError::BadExponent),
            };
            if n > 16 {
                return Err(ParseError::BadExponent);
            }
            let mut acc = RatFunc::from(Expr::int(1));
            for _ in 0..n {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RatFunc, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => {
                Ok(Expr::constant(Scalar::from_rational(BigRational::from_integer(n))).into())
            }
            Some(Tok::Ident(a)) => Ok(Expr::atom(a).into()),
            Some(Tok::C) => Ok(Expr::constant(Scalar::c()).into()),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(_) => Err(ParseError::UnexpectedToken(self.toks[self.at - 1].0)),
                    None => Err(ParseError::UnexpectedEnd),
                }
            }
            Some(_) => Err(ParseError::UnexpectedToken(pos)),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let r = p.sum()?;
    if p.at < p.toks.len() {
        return Err(ParseError::UnexpectedToken(p.toks[p.at].0));
    }
    Ok(r)
}

/// Parses a polynomial; division is allowed only by nonzero rationals.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_ratfunc(text)?.as_expr().ok_or_else(|| ParseError::NotPolynomial(text.to_string()))
}

/// Parses a scalar such as `-3/2` or `c-3`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    parse_expr(text)?.as_constant().ok_or_else(|| ParseError::NotPolynomial(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_multiplication() {
        assert_eq!(parse_expr("5xy").unwrap(), parse_expr("5*x*y").unwrap());
        assert_eq!(parse_expr("1/5x").unwrap(), parse_expr("x/5").unwrap());
        assert_eq!(parse_expr("2(1+x)").unwrap(), parse_expr("2+2x").unwrap());
    }

    #[test]
    fn unicode_and_primes() {
        assert_eq!(parse_expr("1\u{2212}x").unwrap(), parse_expr("1-x").unwrap());
        assert_eq!(parse_expr("x'").unwrap().as_atom(), Some(Atom::new('x').primed()));
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("c-3").unwrap(), Scalar::c_minus(3));
        assert_eq!(parse_scalar("-3/2").unwrap(), Scalar::from_ratio(-3, 2));
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn errors() {
        assert!(parse_expr("1 +").is_err());
        assert!(parse_expr("1/x").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("(1+x").is_err());
        assert!(parse_expr("1 # 2").is_err());
        assert!(parse_expr("x^y").is_err());
    }

    #[test]
    fn round_trip_display() {
        for s in ["1 + 5*x", "1 - x*y", "1 + (c-1)*x", "1 - 1/5*x", "-2 + x + a^2", "2 - x"] {
            let e = parse_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }
}
