//! Proof traces and their independent checker.
//!
//! A trace is a tree. Each node lists narrowing steps of the form
//! `den * target = u * prod(p) + v * prod(q)` together with the class sets
//! used, then ends in a contradiction, a closed goal, a case split, or an
//! open leaf. The checker re-parses every expression, re-verifies every
//! identity, recomputes scalar classes and sum-rule unions from its own
//! state, and never searches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::constants::scalar_class;
use super::engine::term_expr;
use super::expr::{verify_linear, Expr};
use super::parse::{parse_expr, parse_scalar};
use crate::normlattice::{sum_rule, NormLattice};
use crate::scenario::Scenario;
use crate::squareclass::{ClassGroup, ClassSet, SquareClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFact {
    pub expr: String,
    pub set: Vec<String>,
}

impl TraceFact {
    pub fn new(e: &Expr, s: ClassSet) -> Self {
        TraceFact { expr: e.to_string(), set: s.labels() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceObligation {
    pub target: String,
    pub goal: Vec<String>,
}

/// `den * target = u * prod(p) + v * prod(q)`; `v` is absent for a pure rescaling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub target: String,
    pub den: String,
    pub u: String,
    pub p: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<String>,
    pub used: Vec<TraceFact>,
    pub derived: Vec<String>,
    pub before: Vec<String>,
    pub after: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arm {
    pub class: String,
    pub node: ProofNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Contradiction { expr: String },
    Closed,
    Branch { on: String, arms: Vec<Arm> },
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub scenario: Scenario,
    pub depth: u32,
    pub hypotheses: Vec<TraceFact>,
    pub obligations: Vec<TraceObligation>,
    pub root: ProofNode,
}

impl ProofTrace {
    pub fn step_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            n.steps.len()
                + match &n.outcome {
                    Outcome::Branch { arms, .. } => arms.iter().map(|a| count(&a.node)).sum(),
                    _ => 0,
                }
        }
        count(&self.root)
    }

    pub fn branch_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            match &n.outcome {
                Outcome::Branch { arms, .. } => 1 + arms.iter().map(|a| count(&a.node)).sum::<usize>(),
                _ => 0,
            }
        }
        count(&self.root)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceCheck {
    /// Every step and branch recomputed to its recorded content.
    pub valid: bool,
    /// Every leaf is a verified contradiction or a closed goal.
    pub closed: bool,
    pub steps_checked: usize,
    pub errors: Vec<String>,
}

struct Checker<'a> {
    scenario: Scenario,
    lattice: &'a NormLattice,
    obligations: Vec<(Expr, ClassSet)>,
    errors: Vec<String>,
    steps: usize,
}

type State = BTreeMap<Expr, ClassSet>;

fn parse_set(g: ClassGroup, labels: &[String]) -> Result<ClassSet, String> {
    ClassSet::parse_labels(g, labels).map_err(|e| e.to_string())
}

impl Checker<'_> {
    fn group(&self) -> ClassGroup {
        self.scenario.group()
    }

    fn scalar(&self, text: &str) -> Result<(super::scalar::Scalar, SquareClass), String> {
        let s = parse_scalar(text).map_err(|e| format!("scalar `{text}`: {e}"))?;
        let c = scalar_class(self.scenario, &s)
            .map_err(|e| format!("scalar `{text}`: {e}"))?
            .ok_or_else(|| format!("scalar `{text}` has no known class"))?;
        Ok((s, c))
    }

    fn factors(&self, names: &[String], state: &State) -> Result<(Vec<Expr>, Vec<ClassSet>), String> {
        let mut exprs = Vec::new();
        let mut sets = Vec::new();
        for n in names {
            let e = parse_expr(n).map_err(|err| format!("factor `{n}`: {err}"))?;
            let s = *state.get(&e).ok_or_else(|| format!("factor `{n}` is not a known expression"))?;
            exprs.push(e);
            sets.push(s);
        }
        Ok((exprs, sets))
    }

    // Possible classes of a product of factors, keyed by distinct factor.
    fn check_step(&mut self, step: &Step, state: &mut State) -> Result<(), String> {
        let g = self.group();
        let target = parse_expr(&step.target).map_err(|e| format!("target `{}`: {e}", step.target))?;
        let current = *state.get(&target).ok_or_else(|| format!("target `{}` is not known", step.target))?;
        let (den, cden) = self.scalar(&step.den)?;
        let (u, cu) = self.scalar(&step.u)?;
        let (pf, _) = self.factors(&step.p, state)?;
        let (qf, _) = self.factors(&step.q, state)?;
        let p = term_expr(&pf);
        let q = term_expr(&qf);
        let (v, cv) = match &step.v {
            Some(t) => {
                let (v, c) = self.scalar(t)?;
                (v, Some(c))
            }
            None => (super::scalar::Scalar::zero(), None),
        };
        if !verify_linear(&den, &target, &u, &p, &v, &q) {
            return Err(format!("identity fails for step on `{}`", step.target));
        }
        if step.v.is_none() && !qf.is_empty() {
            return Err("rescaling step lists a second term".into());
        }

        // Distinct factors with odd multiplicity in each term.
        let odd = |fs: &[Expr]| -> Vec<Expr> {
            let mut counts: BTreeMap<Expr, u32> = BTreeMap::new();
            for f in fs {
                *counts.entry(f.clone()).or_default() += 1;
            }
            counts.into_iter().filter(|(_, n)| n % 2 == 1).map(|(f, _)| f).collect()
        };
        let p_odd = odd(&pf);
        let q_odd = odd(&qf);
        let mut involved: Vec<Expr> = p_odd.iter().chain(&q_odd).cloned().collect();
        involved.sort();
        involved.dedup();

        let used: BTreeMap<Expr, ClassSet> = step
            .used
            .iter()
            .map(|f| Ok((parse_expr(&f.expr).map_err(|e| e.to_string())?, parse_set(g, &f.set)?)))
            .collect::<Result<_, String>>()?;
        for e in &involved {
            if used.get(e) != state.get(e) {
                return Err(format!("step on `{}` records a stale set for `{e}`", step.target));
            }
        }

        let cu = cu.times(cden);
        let cv = cv.map(|c| c.times(cden));
        let mut derived = g.empty_set();
        let mut assignment: Vec<SquareClass> = Vec::new();
        let lists: Vec<Vec<SquareClass>> = involved.iter().map(|e| state[e].iter().collect()).collect();
        enumerate(&lists, &mut assignment, &mut |asg| {
            let class_of = |terms: &[Expr]| {
                terms.iter().fold(g.identity(), |acc, f| {
                    let pos = involved.iter().position(|x| x == f).expect("involved");
                    acc.times(asg[pos])
                })
            };
            let a = cu.times(class_of(&p_odd));
            let mut got = match cv {
                Some(cv) => sum_rule(self.lattice, a, cv.times(class_of(&q_odd))).set,
                None => ClassSet::singleton(a),
            };
            if let Some(pos) = involved.iter().position(|x| *x == target) {
                got = got.intersect(ClassSet::singleton(asg[pos])).expect("same group");
            }
            derived = derived.union(got).expect("same group");
        });

        if derived.labels() != step.derived {
            return Err(format!(
                "step on `{}`: recorded derived set {:?}, recomputed {derived}",
                step.target, step.derived
            ));
        }
        if current.labels() != step.before {
            return Err(format!("step on `{}`: recorded set before does not match", step.target));
        }
        let after = current.intersect(derived).expect("same group");
        if after.labels() != step.after {
            return Err(format!("step on `{}`: recorded set after does not match", step.target));
        }
        state.insert(target, after);
        Ok(())
    }

    // Returns whether the subtree is closed.
    fn check_node(&mut self, node: &ProofNode, mut state: State) -> bool {
        for step in &node.steps {
            self.steps += 1;
            if let Err(e) = self.check_step(step, &mut state) {
                self.errors.push(e);
                return false;
            }
        }
        match &node.outcome {
            Outcome::Contradiction { expr } => {
                let ok = parse_expr(expr).ok().and_then(|e| state.get(&e).copied()).is_some_and(|s| s.is_empty());
                if !ok {
                    self.errors.push(format!("claimed contradiction on `{expr}` is not an empty set"));
                }
                ok
            }
            Outcome::Closed => {
                for (t, goal) in &self.obligations {
                    if !state.get(t).is_some_and(|s| s.is_subset(*goal)) {
                        self.errors.push(format!("closed leaf does not establish `{t}` in {goal}"));
                        return false;
                    }
                }
                true
            }
            Outcome::Open => false,
            Outcome::Branch { on, arms } => {
                let g = self.group();
                let Some((e, set)) = parse_expr(on).ok().and_then(|e| state.get(&e).map(|s| (e, *s))) else {
                    self.errors.push(format!("branch on unknown expression `{on}`"));
                    return false;
                };
                let mut covered = g.empty_set();
                let mut classes = Vec::new();
                for arm in arms {
                    match g.parse(&arm.class) {
                        Ok(c) => {
                            covered.insert(c);
                            classes.push(c);
                        }
                        Err(err) => {
                            self.errors.push(err.to_string());
                            return false;
                        }
                    }
                }
                if covered != set || classes.len() != set.len() {
                    self.errors.push(format!("branch on `{on}` does not split {set} exactly"));
                    return false;
                }
                let mut closed = true;
                for (arm, c) in arms.iter().zip(classes) {
                    let mut child = state.clone();
                    child.insert(e.clone(), ClassSet::singleton(c));
                    closed &= self.check_node(&arm.node, child);
                }
                closed
            }
        }
    }
}

fn enumerate<F: FnMut(&[SquareClass])>(lists: &[Vec<SquareClass>], cur: &mut Vec<SquareClass>, f: &mut F) {
    if cur.len() == lists.len() {
        f(cur);
        return;
    }
    for &c in &lists[cur.len()] {
        cur.push(c);
        enumerate(lists, cur, f);
        cur.pop();
    }
}

/// Re-verifies a trace against `lattice` without any search.
pub fn check_trace(trace: &ProofTrace, lattice: &NormLattice) -> TraceCheck {
    let g = trace.scenario.group();
    let mut errors = Vec::new();
    let mut state = State::new();
    for h in &trace.hypotheses {
        match (parse_expr(&h.expr), parse_set(g, &h.set)) {
            (Ok(e), Ok(s)) => {
                state.insert(e, s);
            }
            _ => errors.push(format!("bad hypothesis `{}`", h.expr)),
        }
    }
    let mut obligations = Vec::new();
    for o in &trace.obligations {
        match (parse_expr(&o.target), parse_set(g, &o.goal)) {
            (Ok(e), Ok(s)) => obligations.push((e, s)),
            _ => errors.push(format!("bad obligation `{}`", o.target)),
        }
    }
    if !errors.is_empty() {
        return TraceCheck { valid: false, closed: false, steps_checked: 0, errors };
    }
    let mut checker = Checker { scenario: trace.scenario, lattice, obligations, errors, steps: 0 };
    let closed = checker.check_node(&trace.root, state);
    TraceCheck {
        valid: checker.errors.is_empty(),
        closed: closed && checker.errors.is_empty(),
        steps_checked: checker.steps,
        errors: checker.errors,
    }
}
