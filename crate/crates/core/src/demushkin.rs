//! Invariants of one-relator Demushkin presentations.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

/// `p`, the degree `n = [F : Q_p]`, and `s` with `p^s` the largest power of
/// `p` whose roots of unity lie in `F` (`None` when there is no bound).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DemushkinPresentation {
    pub p: u64,
    pub n: u32,
    pub s: Option<u32>,
}

impl DemushkinPresentation {
    pub fn new(p: u64, n: u32, s: Option<u32>) -> Self {
        DemushkinPresentation { p, n, s }
    }

    pub fn generators(&self) -> u32 {
        self.n + 2
    }

    /// Exponent sums of the relator in each generator. Commutators
    /// contribute nothing.
    pub fn relation_exponents(&self) -> Vec<u128> {
        let mut e = vec![0u128; self.generators() as usize];
        match self.s {
            None => {}
            Some(s) => {
                let q = u128::from(self.p).pow(s);
                if q == 2 {
                    e[0] = 2;
                    e[1] = 4;
                } else {
                    e[0] = q;
                }
            }
        }
        e
    }
}

/// `Z/torsion x Z_p^free_rank`; a torsion of 1 means torsion free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub torsion: u128,
    pub free_rank: u32,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion > 1 {
            write!(f, "Z/{} x Z_p^{}", self.torsion, self.free_rank)
        } else {
            write!(f, "Z_p^{}", self.free_rank)
        }
    }
}

/// Smith normal form of the `1 x (n+2)` relation matrix: a single elementary
/// divisor, the gcd of the entries, and one free generator per zero column.
pub fn abelianization(pres: &DemushkinPresentation) -> Abelianization {
    let e = pres.relation_exponents();
    let g = e.iter().fold(0u128, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return Abelianization { torsion: 1, free_rank: pres.generators() };
    }
    Abelianization { torsion: g, free_rank: pres.generators() - 1 }
}

/// Rank of `L^x / (L^x)^2` for a degree `n` extension of `Q_p` containing
/// the square roots of unity.
pub fn square_class_rank(n: u32, _p: u64) -> u32 {
    n + 2
}
