//! Lattice-independent checks: norm groups by bounded search and sampled
//! soundness of the sum rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{square_class_of, Dyadic};
use crate::error::DyadicError;
use crate::normlattice::{hilbert_from_lattice, lattice, sum_rule_mask, LatticeScenario, NormLattice};
use crate::squareclass::{ClassGroup, SquareClass};

/// Valuations tried for the ratio `x / y` in `x^2 - a*y^2`.
pub const SEARCH_VALUATIONS: std::ops::RangeInclusive<i64> = -4..=4;
/// Odd units tried modulo `2^SEARCH_UNIT_BITS`.
pub const SEARCH_UNIT_BITS: u32 = 8;

/// The integer `±1, ±2, ±5, ±10` standing for a Case A class.
pub fn representative(c: SquareClass, k: u32) -> Dyadic {
    let b = c.bits();
    let mut n: i64 = 1;
    if b & 0b010 != 0 {
        n *= 2;
    }
    if b & 0b100 != 0 {
        n *= 5;
    }
    if b & 0b001 != 0 {
        n = -n;
    }
    Dyadic::from_int(n, k).expect("precision at least 3")
}

/// Classes of `x^2 - a*y^2` found by the bounded search, as a mask.
///
/// Scaling by `y^2` reduces the search to `z^2 - a` for `z = x / y`, plus
/// `y = 0`, which contributes the squares.
pub fn norm_classes_search(a: &Dyadic, k: u32) -> Result<u8, DyadicError> {
    if a.is_zero() {
        return Err(DyadicError::Zero);
    }
    let mut found = 1u8;
    let minus_a = a.neg();
    found |= 1 << square_class_of(&minus_a)?.bits();
    for i in SEARCH_VALUATIONS {
        for s in (1u128..1 << SEARCH_UNIT_BITS).step_by(2) {
            let z = Dyadic::new(i, s, k)?;
            match z.square().add(&minus_a) {
                Ok(n) => found |= 1 << square_class_of(&n)?.bits(),
                Err(DyadicError::PrecisionExhausted) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(found)
}

/// `+1` iff the search writes `b` as a norm from `Q_2(sqrt a)`.
pub fn hilbert_search(a: &Dyadic, b: &Dyadic, k: u32) -> Result<i8, DyadicError> {
    let cb = square_class_of(b)?;
    let found = norm_classes_search(a, k)?;
    Ok(if found & (1 << cb.bits()) != 0 { 1 } else { -1 })
}

/// The search result, cross-checked against `l`; disagreement is an error.
pub fn hilbert_oracle_with(l: &NormLattice, a: &Dyadic, b: &Dyadic, k: u32) -> Result<i8, DyadicError> {
    let h = hilbert_search(a, b, k)?;
    let (ca, cb) = (square_class_of(a)?, square_class_of(b)?);
    if hilbert_from_lattice(l, ca, cb) != h {
        return Err(DyadicError::OracleMismatch { a: ca.label(), b: cb.label() });
    }
    Ok(h)
}

pub fn hilbert_oracle(a: &Dyadic, b: &Dyadic, k: u32) -> Result<i8, DyadicError> {
    hilbert_oracle_with(&lattice(LatticeScenario::CaseA), a, b, k)
}

/// Symbols of all class representatives from the search alone, indexed by bits.
pub fn hilbert_matrix_search(k: u32) -> Result<[[i8; 8]; 8], DyadicError> {
    let mut m = [[0i8; 8]; 8];
    for a in ClassGroup::CaseA.elements() {
        let found = norm_classes_search(&representative(a, k), k)?;
        for b in ClassGroup::CaseA.elements() {
            m[a.bits() as usize][b.bits() as usize] = if found & (1 << b.bits()) != 0 { 1 } else { -1 };
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SumRuleReport {
    pub pairs: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
    /// `(a, b, class)` members of a sum-rule set never realized by a sample.
    pub unrealized: Vec<(String, String, String)>,
}

/// Samples `p ~ a`, `q ~ b` as `rep(a) * s^2`, `rep(b) * t^2` and checks the
/// class of `p + q` against the sum rule of `l`.
pub fn sum_rule_soundness(l: &NormLattice, samples: usize, seed: u64, k: u32) -> SumRuleReport {
    let g = ClassGroup::CaseA;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SumRuleReport::default();
    let mut realized = [[0u8; 8]; 8];
    for _ in 0..samples {
        let a = g.class(rng.random_range(0..8));
        let b = g.class(rng.random_range(0..8));
        let s = Dyadic::random(&mut rng, -3, 3, k);
        let t = Dyadic::random(&mut rng, -3, 3, k);
        let p = representative(a, k).mul(&s.square());
        let q = representative(b, k).mul(&t.square());
        let Ok(sum) = p.add(&q) else {
            report.skipped += 1;
            continue;
        };
        let Ok(c) = square_class_of(&sum) else {
            report.skipped += 1;
            continue;
        };
        report.pairs += 1;
        realized[a.bits() as usize][b.bits() as usize] |= 1 << c.bits();
        let allowed = sum_rule_mask(l, a.bits(), b.bits());
        if allowed & (1 << c.bits()) == 0 {
            report.violations.push(format!("{p} + {q} ~ {} outside the set for ({}, {})", c, a, b));
        }
    }
    if samples > 0 {
        for a in g.elements() {
            for b in g.elements() {
                let allowed = sum_rule_mask(l, a.bits(), b.bits());
                let missing = allowed & !realized[a.bits() as usize][b.bits() as usize];
                for c in (0..8).filter(|c| missing & (1 << c) != 0) {
                    report.unrealized.push((a.label(), b.label(), g.class(c).label()));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DEFAULT_PRECISION;
    use crate::normlattice::hilbert_matrix;

    const K: u32 = DEFAULT_PRECISION;

    fn d(s: &str) -> Dyadic {
        Dyadic::parse(s, K).unwrap()
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(hilbert_oracle(&d("-1"), &d("-1"), K), Ok(-1));
        assert_eq!(hilbert_oracle(&d("5"), &d("-1"), K), Ok(1));
        assert_eq!(hilbert_oracle(&d("2"), &d("5"), K), Ok(-1));
        assert_eq!(hilbert_oracle(&d("3"), &d("12"), K), Ok(hilbert_oracle(&d("-5"), &d("-5"), K).unwrap()));
    }

    #[test]
    fn search_matches_lattice() {
        let l = lattice(LatticeScenario::CaseA);
        assert_eq!(hilbert_matrix_search(K).unwrap(), hilbert_matrix(&l));
    }

    #[test]
    fn mutated_lattice_is_caught() {
        let g = ClassGroup::CaseA;
        let mut l = lattice(LatticeScenario::CaseA);
        l.drop_entry(g.parse("-2").unwrap(), g.parse("-5").unwrap());
        assert!(matches!(
            hilbert_oracle_with(&l, &d("-2"), &d("-5"), K),
            Err(DyadicError::OracleMismatch { .. })
        ));
    }

    #[test]
    fn sum_rule_sampling() {
        let l = lattice(LatticeScenario::CaseA);
        let r = sum_rule_soundness(&l, 4000, 7, K);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.pairs > 3900);
        assert!(sum_rule_soundness(&l, 0, 7, K).unrealized.is_empty());
    }
}
