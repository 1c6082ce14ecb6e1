//! Decomposition search, fixpoint propagation and branching proof search.
//!
//! A knowledge base fixes a finite universe of expressions. From it we build
//! a pool of terms (the constant 1, every expression, and admissible
//! pairwise products) and precompute, for each expression `T`, every way of
//! writing `den * T = u * P + v * Q` (or `den * T = u * P`) with pool terms
//! `P`, `Q` and scalars of known class. Propagation then only has to replay
//! those decompositions against the current class sets.

use std::collections::BTreeMap;

use serde::Serialize;

use super::constants::scalar_bits;
use super::expr::{product, Expr, Monomial};
use super::kb::KnowledgeBase;
use super::scalar::Scalar;
use super::trace::{Arm, Outcome, ProofNode, ProofTrace, Step, TraceFact, TraceObligation};
use crate::error::DerivationError;
use crate::normlattice::sum_rule_mask;
use crate::scenario::Scenario;
use crate::squareclass::ClassSet;

/// Which products enter the decomposition pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PoolConfig {
    /// Maximum total degree of a product term.
    pub max_degree: u32,
    /// Include products of two distinct expressions.
    pub products: bool,
    /// Include squares of bare unknowns (`a*a`, always of class 1).
    pub atom_squares: bool,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig { max_degree: 2, products: true, atom_squares: true }
    }
}

// Value substituted for `c` in the floating-point prefilter of the build.
const C_PROBE: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Debug)]
struct Term {
    factors: Vec<usize>,
    odd: Vec<usize>,
    expr: Expr,
}

#[derive(Clone, Debug)]
struct Decomp {
    p: usize,
    q: Option<usize>,
    cu: u8,
    cv: u8,
    den: Scalar,
    u: Scalar,
    v: Scalar,
    involved: Vec<usize>,
    p_sel: u8,
    q_sel: u8,
    self_pos: Option<usize>,
}

/// The precomputed decompositions of one expression universe.
#[derive(Clone, Debug)]
pub struct Universe {
    scenario: Scenario,
    exprs: Vec<Expr>,
    terms: Vec<Term>,
    decomps: Vec<Vec<Decomp>>,
    /// `sums[a][b]`: the classes of a sum of classes `a` and `b`.
    sums: [[u8; 8]; 8],
}

fn odd_factors(factors: &[usize]) -> Vec<usize> {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for &f in factors {
        *counts.entry(f).or_default() += 1;
    }
    counts.into_iter().filter(|(_, n)| n % 2 == 1).map(|(f, _)| f).collect()
}

fn support(e: &Expr, index: &BTreeMap<Monomial, usize>) -> u128 {
    e.monomials().fold(0u128, |acc, m| acc | (1u128 << index[m].min(127)))
}

fn dense(e: &Expr, index: &BTreeMap<Monomial, usize>) -> Vec<f64> {
    let mut out = vec![0.0; index.len()];
    for (m, c) in e.terms() {
        out[index[m]] = c.approx(C_PROBE);
    }
    out
}

// Whether `t = u*p + v*q` can hold, judged in floating point. Only rejects
// pairs that clearly fail; the exact solve decides the rest.
fn maybe_pair(t: &[f64], p: &[f64], q: &[f64]) -> bool {
    let rows: Vec<usize> = (0..t.len()).filter(|&i| t[i] != 0.0 || p[i] != 0.0 || q[i] != 0.0).collect();
    let mut best = (0.0f64, 0, 0);
    for (k, &i) in rows.iter().enumerate() {
        for &j in &rows[k + 1..] {
            let det = p[i] * q[j] - p[j] * q[i];
            if det.abs() > best.0 {
                best = (det.abs(), i, j);
            }
        }
    }
    let (size, i, j) = best;
    if size < 1e-9 {
        return true;
    }
    let det = p[i] * q[j] - p[j] * q[i];
    let u = (t[i] * q[j] - t[j] * q[i]) / det;
    let v = (p[i] * t[j] - p[j] * t[i]) / det;
    let scale = 1.0 + u.abs() + v.abs();
    rows.iter().all(|&r| (t[r] - u * p[r] - v * q[r]).abs() <= 1e-7 * scale * (1.0 + t[r].abs() + p[r].abs() + q[r].abs()))
}

fn coeff(e: &Expr, m: &Monomial) -> Scalar {
    e.coeff(m).cloned().unwrap_or_else(Scalar::zero)
}

impl Universe {
    pub fn build(kb: &KnowledgeBase, config: PoolConfig) -> Universe {
        let scenario = kb.scenario();
        let exprs: Vec<Expr> = kb.entries().iter().map(|(e, _)| e.clone()).collect();
        let n = exprs.len();

        let mut terms = vec![Term { factors: vec![], odd: vec![], expr: Expr::int(1) }];
        for (i, e) in exprs.iter().enumerate() {
            terms.push(Term { factors: vec![i], odd: vec![i], expr: e.clone() });
        }
        let mut seen: std::collections::HashSet<Expr> = terms.iter().map(|t| t.expr.clone()).collect();
        for i in 0..n {
            for j in i..n {
                let square = i == j;
                if square && !(config.atom_squares && exprs[i].as_atom().is_some()) {
                    continue;
                }
                if !square && !config.products {
                    continue;
                }
                let prod = &exprs[i] * &exprs[j];
                if prod.degree() > config.max_degree || (!square && !prod.is_multilinear()) {
                    continue;
                }
                if seen.insert(prod.clone()) {
                    let factors = vec![i, j];
                    terms.push(Term { odd: odd_factors(&factors), factors, expr: prod });
                }
            }
        }

        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        for t in &terms {
            for m in t.expr.monomials() {
                let k = index.len();
                index.entry(m.clone()).or_insert(k);
            }
        }
        let supports: Vec<u128> = terms.iter().map(|t| support(&t.expr, &index)).collect();
        let approx: Vec<Vec<f64>> = terms.iter().map(|t| dense(&t.expr, &index)).collect();

        let decomps = (0..n)
            .map(|ti| {
                let target = &exprs[ti];
                let ts = supports[ti + 1];
                let mut out = Vec::new();
                for (pi, p) in terms.iter().enumerate() {
                    if pi == ti + 1 {
                        continue;
                    }
                    let ps = supports[pi];
                    if ps == ts {
                        if let Some(d) = Self::solve_single(scenario, target, pi, p, &terms) {
                            out.push(d);
                        }
                    }
                    for (qi, q) in terms.iter().enumerate().skip(pi + 1) {
                        if qi == ti + 1 {
                            continue;
                        }
                        let qs = supports[qi];
                        if ts & !(ps | qs) != 0 || ps & !ts & !qs != 0 || qs & !ts & !ps != 0 {
                            continue;
                        }
                        if !maybe_pair(&approx[ti + 1], &approx[pi], &approx[qi]) {
                            continue;
                        }
                        if let Some(d) = Self::solve_pair(scenario, target, (pi, p), (qi, q), &terms) {
                            out.push(d);
                        }
                    }
                }
                for d in &mut out {
                    d.self_pos = d.involved.iter().position(|&f| f == ti);
                }
                out
            })
            .collect();

        let lattice = kb.lattice();
        let mut sums = [[0u8; 8]; 8];
        for (a, row) in sums.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = sum_rule_mask(lattice, a as u8, b as u8);
            }
        }
        Universe { scenario, exprs, terms, decomps, sums }
    }

    fn finish(
        p: usize,
        q: Option<usize>,
        (cu, cv): (u8, u8),
        (den, u, v): (Scalar, Scalar, Scalar),
        terms: &[Term],
    ) -> Decomp {
        let mut involved: Vec<usize> = terms[p].odd.clone();
        if let Some(q) = q {
            involved.extend(terms[q].odd.iter().copied());
        }
        involved.sort();
        involved.dedup();
        let sel = |t: usize| {
            terms[t].odd.iter().fold(0u8, |acc, f| acc | 1 << involved.iter().position(|g| g == f).unwrap())
        };
        let p_sel = sel(p);
        let q_sel = q.map(sel).unwrap_or(0);
        Decomp { p, q, cu, cv, den, u, v, involved, p_sel, q_sel, self_pos: None }
    }

    // den * T = u * P.
    fn solve_single(scenario: Scenario, target: &Expr, pi: usize, p: &Term, terms: &[Term]) -> Option<Decomp> {
        let m = target.monomials().next()?;
        let den = coeff(&p.expr, m);
        let u = coeff(target, m);
        if den.is_zero() || u.is_zero() {
            return None;
        }
        if !(target.scale(&den) - p.expr.scale(&u)).is_zero() {
            return None;
        }
        let (den, u, _) = normalize(den, u, Scalar::zero());
        let cd = scalar_bits(scenario, &den)?;
        let cu = scalar_bits(scenario, &u)? ^ cd;
        Some(Self::finish(pi, None, (cu, 0), (den, u, Scalar::zero()), terms))
    }

    // den * T = u * P + v * Q with u, v both nonzero.
    fn solve_pair(
        scenario: Scenario,
        target: &Expr,
        (pi, p): (usize, &Term),
        (qi, q): (usize, &Term),
        terms: &[Term],
    ) -> Option<Decomp> {
        let mut rows: Vec<&Monomial> = p.expr.monomials().chain(q.expr.monomials()).collect();
        rows.sort();
        rows.dedup();
        let mut found = None;
        'outer: for (a, ma) in rows.iter().enumerate() {
            for mb in &rows[a + 1..] {
                let det = &(&coeff(&p.expr, ma) * &coeff(&q.expr, mb)) - &(&coeff(&p.expr, mb) * &coeff(&q.expr, ma));
                if !det.is_zero() {
                    found = Some((*ma, *mb, det));
                    break 'outer;
                }
            }
        }
        let (ma, mb, den) = found?;
        let u = &(&coeff(target, ma) * &coeff(&q.expr, mb)) - &(&coeff(target, mb) * &coeff(&q.expr, ma));
        let v = &(&coeff(&p.expr, ma) * &coeff(target, mb)) - &(&coeff(&p.expr, mb) * &coeff(target, ma));
        if u.is_zero() || v.is_zero() {
            return None;
        }
        if !(target.scale(&den) - p.expr.scale(&u) - q.expr.scale(&v)).is_zero() {
            return None;
        }
        let (den, u, v) = normalize(den, u, v);
        let cd = scalar_bits(scenario, &den)?;
        let cu = scalar_bits(scenario, &u)? ^ cd;
        let cv = scalar_bits(scenario, &v)? ^ cd;
        Some(Self::finish(pi, Some(qi), (cu, cv), (den, u, v), terms))
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }

    pub fn expr(&self, i: usize) -> &Expr {
        &self.exprs[i]
    }

    pub fn index_of(&self, e: &Expr) -> Option<usize> {
        self.exprs.binary_search(e).ok()
    }

    pub fn pool_size(&self) -> usize {
        self.terms.len()
    }

    pub fn decomposition_count(&self) -> usize {
        self.decomps.iter().map(Vec::len).sum()
    }

    /// The set implied for `T` by one decomposition under the current sets.
    ///
    /// Tracks the reachable classes `(a, b)` of `u*P` and `v*Q` one factor
    /// at a time, split by the class chosen for `T` when `T` is a factor.
    fn eval(&self, d: &Decomp, masks: &[u8]) -> u8 {
        if d.involved.iter().any(|&f| masks[f] == 0xFF) {
            return 0xFF;
        }
        let mut states = [0u64; 8];
        states[0] = 1 << (d.cu * 8 + d.cv);
        for (pos, &f) in d.involved.iter().enumerate() {
            let in_p = d.p_sel & (1 << pos) != 0;
            let in_q = d.q_sel & (1 << pos) != 0;
            let is_self = d.self_pos == Some(pos);
            let mut next = [0u64; 8];
            for (slot, &pairs) in states.iter().enumerate() {
                let mut rest = pairs;
                while rest != 0 {
                    let pair = rest.trailing_zeros() as u8;
                    rest &= rest - 1;
                    for bit in (0u8..8).filter(|b| masks[f] & (1 << b) != 0) {
                        let a = (pair >> 3) ^ if in_p { bit } else { 0 };
                        let b = (pair & 7) ^ if in_q { bit } else { 0 };
                        let to = if is_self { bit as usize } else { slot };
                        next[to] |= 1 << (a * 8 + b);
                    }
                }
            }
            states = next;
        }
        let mut out = 0u8;
        for (slot, &pairs) in states.iter().enumerate() {
            let mut rest = pairs;
            while rest != 0 {
                let pair = rest.trailing_zeros() as u8;
                rest &= rest - 1;
                let (a, b) = (pair >> 3, pair & 7);
                let mut got = match d.q {
                    Some(_) => self.sums[a as usize][b as usize],
                    None => 1 << a,
                };
                if d.self_pos.is_some() {
                    got &= 1 << slot;
                }
                out |= got;
            }
        }
        out
    }

    fn step(&self, t: usize, d: &Decomp, masks: &[u8], derived: u8, before: u8) -> Step {
        let g = self.scenario.group();
        let names = |term: usize| self.terms[term].factors.iter().map(|&f| self.exprs[f].to_string()).collect();
        Step {
            target: self.exprs[t].to_string(),
            den: d.den.to_string(),
            u: d.u.to_string(),
            p: names(d.p),
            v: d.q.map(|_| d.v.to_string()),
            q: d.q.map(names).unwrap_or_default(),
            used: d
                .involved
                .iter()
                .map(|&f| TraceFact::new(&self.exprs[f], ClassSet::from_mask(g, masks[f])))
                .collect(),
            derived: ClassSet::from_mask(g, derived).labels(),
            before: ClassSet::from_mask(g, before).labels(),
            after: ClassSet::from_mask(g, before & derived).labels(),
        }
    }

    /// Runs all decompositions to a fixpoint, narrowing `masks` in place.
    ///
    /// Returns the recorded steps, and the index of an emptied set if a
    /// contradiction was reached.
    pub(crate) fn fixpoint(&self, masks: &mut [u8]) -> (Vec<Step>, Option<usize>) {
        let mut steps = Vec::new();
        loop {
            let mut changed = false;
            for t in 0..self.exprs.len() {
                for d in &self.decomps[t] {
                    let derived = self.eval(d, masks);
                    let before = masks[t];
                    if before & !derived == 0 {
                        continue;
                    }
                    steps.push(self.step(t, d, masks, derived, before));
                    masks[t] = before & derived;
                    changed = true;
                    if masks[t] == 0 {
                        return (steps, Some(t));
                    }
                }
            }
            if !changed {
                return (steps, None);
            }
        }
    }

    /// One pass of all decompositions of `t`, without updating anything.
    pub(crate) fn derive_once(&self, t: usize, masks: &[u8]) -> u8 {
        self.decomps[t].iter().fold(masks[t], |acc, d| acc & self.eval(d, masks))
    }
}

// Cancels rational scalars to `u/den, v/den` with `den = 1`; keeps the sign
// of a polynomial denominator positive.
fn normalize(den: Scalar, u: Scalar, v: Scalar) -> (Scalar, Scalar, Scalar) {
    if let Some(q) = den.as_rational() {
        let inv = q.recip();
        return (Scalar::one(), u.scale(&inv), v.scale(&inv));
    }
    if den.is_negative_leading() {
        return (-den, -u, -v);
    }
    (den, u, v)
}

/// `target ⊆ goal` must hold at every surviving leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub target: Expr,
    pub goal: ClassSet,
}

impl Obligation {
    pub fn new(target: Expr, goal: ClassSet) -> Self {
        Obligation { target, goal }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofStatus {
    Proved,
    Stuck,
    HypothesisImpossible,
}

impl ProofStatus {
    pub fn name(self) -> &'static str {
        match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Stuck => "stuck",
            ProofStatus::HypothesisImpossible => "hypothesis-impossible",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub trace: ProofTrace,
    /// Per obligation: union of the target's sets over non-contradictory leaves.
    pub target_sets: Vec<ClassSet>,
    /// Sets after the root propagation, before any branching.
    pub root_kb: KnowledgeBase,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Proved,
    Stuck,
    Contradiction,
}

struct Search<'a> {
    universe: &'a Universe,
    targets: Vec<(usize, u8)>,
}

impl Search<'_> {
    fn run(&self, masks: &mut Vec<u8>, depth: u32) -> (Verdict, ProofNode, Vec<u8>) {
        let (steps, contra) = self.universe.fixpoint(masks);
        if let Some(t) = contra {
            let outcome = Outcome::Contradiction { expr: self.universe.exprs[t].to_string() };
            return (Verdict::Contradiction, ProofNode { steps, outcome }, vec![0; self.targets.len()]);
        }
        let sets: Vec<u8> = self.targets.iter().map(|&(t, _)| masks[t]).collect();
        if self.targets.iter().all(|&(t, goal)| masks[t] & !goal == 0) {
            return (Verdict::Proved, ProofNode { steps, outcome: Outcome::Closed }, sets);
        }
        if depth == 0 {
            return (Verdict::Stuck, ProofNode { steps, outcome: Outcome::Open }, sets);
        }
        let Some(on) = (0..masks.len())
            .filter(|&i| masks[i].count_ones() >= 2)
            .min_by_key(|&i| (masks[i].count_ones(), i))
        else {
            return (Verdict::Stuck, ProofNode { steps, outcome: Outcome::Open }, sets);
        };
        let g = self.universe.scenario.group();
        let mut arms = Vec::new();
        let mut verdicts = Vec::new();
        let mut union = vec![0u8; self.targets.len()];
        for bit in (0u8..8).filter(|b| masks[on] & (1 << b) != 0) {
            let mut child = masks.clone();
            child[on] = 1 << bit;
            let (v, node, s) = self.run(&mut child, depth - 1);
            if v != Verdict::Contradiction {
                for (u, x) in union.iter_mut().zip(&s) {
                    *u |= x;
                }
            }
            verdicts.push(v);
            arms.push(Arm { class: g.class(bit).label(), node });
        }
        let verdict = if verdicts.iter().all(|&v| v == Verdict::Contradiction) {
            Verdict::Contradiction
        } else if verdicts.iter().all(|&v| v != Verdict::Stuck) {
            Verdict::Proved
        } else {
            Verdict::Stuck
        };
        let outcome = Outcome::Branch { on: self.universe.exprs[on].to_string(), arms };
        (verdict, ProofNode { steps, outcome }, union)
    }
}

/// Proves every obligation by propagation and case splitting up to `depth`.
pub fn prove_obligations(kb: &KnowledgeBase, obligations: &[Obligation], depth: u32) -> ProofResult {
    prove_with_config(kb, obligations, depth, PoolConfig::default())
}

pub fn prove_with_config(
    kb: &KnowledgeBase,
    obligations: &[Obligation],
    depth: u32,
    config: PoolConfig,
) -> ProofResult {
    let mut kb = kb.clone();
    for o in obligations {
        kb.track(o.target.clone());
    }
    let universe = Universe::build(&kb, config);
    let targets: Vec<(usize, u8)> = obligations
        .iter()
        .map(|o| (universe.index_of(&o.target).expect("tracked target"), o.goal.mask()))
        .collect();
    let hypotheses: Vec<TraceFact> = kb.facts().map(|(e, s)| TraceFact::new(e, s)).collect();
    let mut masks: Vec<u8> = kb.entries().iter().map(|(_, m)| *m).collect();

    let search = Search { universe: &universe, targets };
    let mut root_masks = masks.clone();
    universe.fixpoint(&mut root_masks);
    let (verdict, root, sets) = search.run(&mut masks, depth);

    let mut root_kb = kb.clone();
    if root_masks.iter().all(|&m| m != 0) {
        root_kb.set_masks(&root_masks);
    }
    let g = kb.group();
    let status = match verdict {
        Verdict::Proved => ProofStatus::Proved,
        Verdict::Stuck => ProofStatus::Stuck,
        Verdict::Contradiction => ProofStatus::HypothesisImpossible,
    };
    ProofResult {
        status,
        trace: ProofTrace {
            scenario: kb.scenario(),
            depth,
            hypotheses,
            obligations: obligations
                .iter()
                .map(|o| TraceObligation { target: o.target.to_string(), goal: o.goal.labels() })
                .collect(),
            root,
        },
        target_sets: sets.into_iter().map(|m| ClassSet::from_mask(g, m)).collect(),
        root_kb,
    }
}

/// Outcome of [`prove`] for a single target.
#[derive(Clone, Debug)]
pub enum ProveOutcome {
    Proved(ProofTrace),
    Stuck(ClassSet),
}

pub fn prove(kb: &KnowledgeBase, target: &Expr, goal: ClassSet, depth: u32) -> Result<ProveOutcome, DerivationError> {
    let r = prove_obligations(kb, &[Obligation::new(target.clone(), goal)], depth);
    match r.status {
        ProofStatus::Proved => Ok(ProveOutcome::Proved(r.trace)),
        ProofStatus::Stuck => Ok(ProveOutcome::Stuck(r.target_sets[0])),
        ProofStatus::HypothesisImpossible => Err(DerivationError::InconsistentHypotheses),
    }
}

/// Intersection of every decomposition of `target` against `kb`, one pass.
pub fn decompose_step(kb: &KnowledgeBase, target: &Expr) -> Result<ClassSet, DerivationError> {
    let mut kb = kb.clone();
    kb.track(target.clone());
    let universe = Universe::build(&kb, PoolConfig::default());
    let t = universe.index_of(target).ok_or_else(|| DerivationError::MissingFact(target.to_string()))?;
    let masks: Vec<u8> = kb.entries().iter().map(|(_, m)| *m).collect();
    let m = universe.derive_once(t, &masks);
    if m == 0 {
        return Err(DerivationError::ContradictionFound(target.to_string()));
    }
    Ok(ClassSet::from_mask(kb.group(), m))
}

/// Narrows every fact (and the given targets) to the propagation fixpoint.
pub fn propagate(kb: &KnowledgeBase, targets: &[Expr]) -> Result<KnowledgeBase, DerivationError> {
    let mut kb = kb.clone();
    for t in targets {
        kb.track(t.clone());
    }
    let universe = Universe::build(&kb, PoolConfig::default());
    let mut masks: Vec<u8> = kb.entries().iter().map(|(_, m)| *m).collect();
    let (_, contra) = universe.fixpoint(&mut masks);
    if let Some(t) = contra {
        return Err(DerivationError::ContradictionFound(universe.exprs[t].to_string()));
    }
    kb.set_masks(&masks);
    Ok(kb)
}

/// Product of expressions, as the checker rebuilds pool terms.
pub(crate) fn term_expr(factors: &[Expr]) -> Expr {
    product(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::trace::check_trace;
    use crate::squareclass::ClassGroup;

    fn kb_a(facts: &[(&str, &str)]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new(Scenario::CaseA);
        for (e, s) in facts {
            kb.assume_str(e, s).unwrap();
        }
        kb
    }

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn set(g: ClassGroup, s: &str) -> ClassSet {
        ClassSet::parse(g, s).unwrap()
    }

    #[test]
    fn decompose_step_examples() {
        let g = ClassGroup::CaseA;
        let kb = kb_a(&[("x", "2"), ("1+x", "1")]);
        assert_eq!(decompose_step(&kb, &e("1+2x")).unwrap(), set(g, "{1,2}"));
        let kb = kb_a(&[("x", "2"), ("1+x", "1"), ("1+5x", "1")]);
        assert_eq!(decompose_step(&kb, &e("1+2x")).unwrap(), set(g, "{1}"));

        let gb = ClassGroup::CaseB;
        let mut kb = KnowledgeBase::new(Scenario::CaseB3Is2);
        kb.assume_str("x", "c").unwrap();
        kb.assume_str("1+x", "1").unwrap();
        assert_eq!(decompose_step(&kb, &e("1-x")).unwrap(), set(gb, "{1,-1}"));
    }

    #[test]
    fn propagate_examples() {
        let g = ClassGroup::CaseA;
        let kb = kb_a(&[("x", "2"), ("1+x", "1")]);
        let out = propagate(&kb, &[e("1+2x"), e("1+4x"), e("1+5x"), e("1-x")]).unwrap();
        assert_eq!(out.set_of(&e("1+5x")).unwrap(), set(g, "{1}"));
        assert_eq!(out.set_of(&e("1+2x")).unwrap(), set(g, "{1}"));
        assert!(out.set_of(&e("1+4x")).unwrap().is_subset(set(g, "{1,-5}")));

        let same = propagate(&kb, &[]).unwrap();
        assert_eq!(same.facts().collect::<Vec<_>>(), kb.facts().collect::<Vec<_>>());
    }

    #[test]
    fn prove_examples() {
        let g = ClassGroup::CaseA;
        let n5 = set(g, "{1,-1,5,-5}");
        let mut kb = kb_a(&[("x", "2"), ("1+x", "1")]);
        kb.track(e("1+5x"));
        match prove(&kb, &e("1+4x"), n5, 3).unwrap() {
            ProveOutcome::Proved(trace) => {
                let check = check_trace(&trace, &kb.lattice().clone());
                assert!(check.valid && check.closed, "{:?}", check.errors);
            }
            ProveOutcome::Stuck(s) => panic!("stuck with {s}"),
        }
        let kb = kb_a(&[("x", "-10"), ("1+x", "-1")]);
        assert!(matches!(prove(&kb, &e("1+2x"), n5, 0).unwrap(), ProveOutcome::Proved(_)));
        let kb = kb_a(&[("x", "2"), ("1+x", "1")]);
        assert!(matches!(prove(&kb, &e("1+3x"), g.full_set(), 0).unwrap(), ProveOutcome::Proved(_)));
    }

    #[test]
    fn inconsistent_hypotheses() {
        // x ~ 2 forces 1 + x into N(-2) = {1, 2, -5, -10}.
        let kb = kb_a(&[("x", "2"), ("1+x", "-1")]);
        let g = ClassGroup::CaseA;
        assert!(matches!(
            prove(&kb, &e("1+2x"), g.full_set(), 2),
            Err(DerivationError::InconsistentHypotheses)
        ));
    }
}
