//! Concrete 2-adic instances of class hypotheses about expressions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::oracle::representative;
use super::{square_class_of, Dyadic};
use crate::derivation::expr::{Atom, Expr};
use crate::error::DyadicError;
use crate::squareclass::{ClassGroup, ClassSet};

pub type Assignment = BTreeMap<Atom, Dyadic>;

/// Value of a polynomial with rational coefficients at a point.
pub fn eval_expr(e: &Expr, at: &Assignment, k: u32) -> Result<Dyadic, DyadicError> {
    let mut total = Dyadic::zero(k);
    for (m, s) in e.terms() {
        let q = s.as_rational().ok_or_else(|| DyadicError::BadRational(s.to_string()))?;
        let mut t = Dyadic::from_rational(&q, k)?;
        for &(a, n) in m.factors() {
            let x = at.get(&a).ok_or_else(|| DyadicError::BadRational(format!("unbound {a}")))?;
            for _ in 0..n {
                t = t.mul(x);
            }
        }
        total = total.add(&t)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SampleResult {
    #[serde(skip)]
    pub tuples: Vec<Assignment>,
    pub found: usize,
    pub attempts: usize,
    /// No instance was found within the attempt budget.
    pub unsatisfiable_at_budget: bool,
}

const SMALL_ODD: [i64; 8] = [1, 3, 5, 7, 9, 11, 13, 15];
const SMALL_EXP: std::ops::RangeInclusive<i64> = -4..=6;
const SMALL_COMBOS: usize = 20_000;
const ATTEMPTS_PER_SAMPLE: usize = 400;

fn holds(hyp: &[(Expr, ClassSet)], at: &Assignment, k: u32) -> bool {
    hyp.iter().all(|(e, set)| match eval_expr(e, at, k).and_then(|v| square_class_of(&v)) {
        Ok(c) => set.contains(c),
        Err(_) => false,
    })
}

/// Up to `count` points satisfying every `(expr, set)` hypothesis.
///
/// Small numbers `±m * 2^e` are tried first, so the simplest witnesses
/// appear early; the rest are random `rep(c) * s^2` with `c` drawn from
/// the atom's own hypothesis.
pub fn sample_hypothesis(hyp: &[(Expr, ClassSet)], count: usize, seed: u64, k: u32) -> SampleResult {
    let mut result = SampleResult::default();
    if count == 0 {
        return result;
    }
    if hyp.iter().any(|(_, s)| s.group() != ClassGroup::CaseA) {
        result.unsatisfiable_at_budget = true;
        return result;
    }
    let mut atoms: Vec<Atom> = hyp.iter().flat_map(|(e, _)| e.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    let pinned: Vec<ClassSet> = atoms
        .iter()
        .map(|&a| {
            hyp.iter()
                .filter(|(e, _)| e.as_atom() == Some(a))
                .fold(ClassGroup::CaseA.full_set(), |acc, (_, s)| ClassSet::from_mask(acc.group(), acc.mask() & s.mask()))
        })
        .collect();
    if pinned.iter().any(|s| s.is_empty()) {
        result.unsatisfiable_at_budget = true;
        return result;
    }

    let small: Vec<Vec<Dyadic>> = pinned.iter().map(|&s| small_candidates(s, k)).collect();
    let quota = count.div_ceil(4);
    let mut idx = vec![0usize; atoms.len()];
    if small.iter().all(|c| !c.is_empty()) {
        'outer: for _ in 0..SMALL_COMBOS {
            result.attempts += 1;
            let at: Assignment = atoms.iter().zip(&idx).enumerate().map(|(j, (&a, &i))| (a, small[j][i])).collect();
            if holds(hyp, &at, k) {
                result.tuples.push(at);
                if result.tuples.len() >= quota {
                    break;
                }
            }
            // Odometer over the candidate lists.
            for j in 0..idx.len() {
                idx[j] += 1;
                if idx[j] < small[j].len() {
                    continue 'outer;
                }
                idx[j] = 0;
            }
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = count * ATTEMPTS_PER_SAMPLE;
    let mut tries = 0;
    while result.tuples.len() < count && tries < budget {
        tries += 1;
        let at: Assignment = atoms
            .iter()
            .zip(&pinned)
            .map(|(&a, &set)| {
                let classes: Vec<_> = set.iter().collect();
                let c = classes[rng.random_range(0..classes.len())];
                let s = Dyadic::random(&mut rng, -4, 4, k);
                (a, representative(c, k).mul(&s.square()))
            })
            .collect();
        if holds(hyp, &at, k) {
            result.tuples.push(at);
        }
    }
    result.attempts += tries;
    result.found = result.tuples.len();
    result.unsatisfiable_at_budget = result.tuples.is_empty();
    result
}

fn small_candidates(set: ClassSet, k: u32) -> Vec<Dyadic> {
    let mut out: Vec<(BigRational, Dyadic)> = Vec::new();
    for e in SMALL_EXP {
        for m in SMALL_ODD {
            for sign in [1i64, -1] {
                let q = BigRational::from_integer(BigInt::from(sign * m))
                    * if e >= 0 {
                        BigRational::from_integer(BigInt::from(1i64 << e))
                    } else {
                        BigRational::new(BigInt::from(1), BigInt::from(1i64 << -e))
                    };
                let Ok(d) = Dyadic::from_rational(&q, k) else { continue };
                if square_class_of(&d).is_ok_and(|c| set.contains(c)) {
                    out.push((q, d));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.abs().cmp(&b.0.abs()).then_with(|| b.0.cmp(&a.0)));
    out.into_iter().map(|(_, d)| d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DEFAULT_PRECISION;

    const K: u32 = DEFAULT_PRECISION;

    fn hyp(facts: &[(&str, &str)]) -> Vec<(Expr, ClassSet)> {
        facts
            .iter()
            .map(|(e, s)| (Expr::parse(e).unwrap(), ClassSet::parse(ClassGroup::CaseA, s).unwrap()))
            .collect()
    }

    fn x_values(r: &SampleResult) -> Vec<Dyadic> {
        r.tuples.iter().map(|t| t[&Atom::new('x')]).collect()
    }

    #[test]
    fn examples() {
        let r = sample_hypothesis(&hyp(&[("x", "{2}"), ("1+x", "{1}")]), 40, 0, K);
        assert_eq!(r.found, 40);
        assert!(x_values(&r).contains(&Dyadic::from_int(32, K).unwrap()));
        let r = sample_hypothesis(&hyp(&[("x", "{2}"), ("1+x", "{-5}")]), 40, 0, K);
        assert!(x_values(&r).contains(&Dyadic::from_int(2, K).unwrap()));
        // -1 is a norm from Q_2(sqrt 5), so x ~ -1 never lies outside T.
        let r = sample_hypothesis(&hyp(&[("x", "{-1}"), ("x", "{2,-2,10,-10}")]), 10, 0, K);
        assert!(r.tuples.is_empty() && r.unsatisfiable_at_budget);
    }

    #[test]
    fn two_variables_and_determinism() {
        let h = hyp(&[("x", "{2}"), ("1+x", "{-5}"), ("y", "{2}"), ("1+y", "{-5}")]);
        let a = sample_hypothesis(&h, 100, 3, K);
        let b = sample_hypothesis(&h, 100, 3, K);
        assert_eq!(a.found, 100);
        assert_eq!(a.tuples, b.tuples);
        let e = Expr::parse("1 - x*y").unwrap();
        for t in &a.tuples {
            assert_eq!(square_class_of(&eval_expr(&e, t, K).unwrap()).unwrap().label(), "5");
        }
    }
}
