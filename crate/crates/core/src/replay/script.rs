//! Scripted items: identity chains, coverage of the reduced cases, and the
//! stored scalar classes.

use serde::Serialize;

use super::cases::{N5, NOT_N5, PROP_4_6_CASES, ROWS_A};
use super::tables::{table1_cell, table2_rows};
use crate::derivation::{verify_identity, RatFunc};
use crate::normlattice::NormLattice;
use crate::scenario::Scenario;
use crate::squareclass::{ClassGroup, ClassSet, SquareClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScriptStep {
    pub claim: String,
    /// `lhs = rhs`, verified as rational functions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    pub detail: String,
    pub holds: bool,
}

fn identity_holds(lhs: &str, rhs: &str) -> bool {
    match (RatFunc::parse(lhs), RatFunc::parse(rhs)) {
        (Ok(a), Ok(b)) => verify_identity(&a, &b),
        _ => false,
    }
}

struct Script {
    g: ClassGroup,
    steps: Vec<ScriptStep>,
}

impl Script {
    fn set(&self, s: &str) -> ClassSet {
        ClassSet::parse(self.g, s).expect("literal set")
    }

    fn class(&self, s: &str) -> SquareClass {
        self.g.parse(s).expect("literal class")
    }

    /// Records `lhs = rhs` (if given) and `derived ⊆ required`.
    fn step(&mut self, claim: &str, identity: Option<(&str, &str)>, derived: ClassSet, required: ClassSet) {
        let id_ok = identity.is_none_or(|(l, r)| identity_holds(l, r));
        let holds = id_ok && derived.is_subset(required);
        self.steps.push(ScriptStep {
            claim: claim.to_string(),
            identity: identity.map(|(l, r)| format!("{l} = {r}")),
            detail: format!("{derived} ⊆ {required}"),
            holds,
        });
    }

    fn product(&self, a: ClassSet, b: ClassSet) -> ClassSet {
        a.product(b).expect("same group")
    }
}

/// The closure of `O1` under `-1`, `5` and `1/5` as a chain of identities
/// and class computations, using `1 + 2z, 1 + 4z` in `N(5)` for `z` in `O1`.
pub fn closure_script(l: &NormLattice) -> Vec<ScriptStep> {
    let mut s = Script { g: ClassGroup::CaseA, steps: Vec::new() };
    let n5 = l.norm_group(s.class("5"));
    let out = n5.complement();
    let x = s.set(NOT_N5);
    let x1 = n5;
    let minus = s.class("-1");
    let five = s.class("5");
    let two = s.class("2");
    s.step("N(5) is the stated group", None, s.set(N5), n5);
    s.step("N(5) contains the identity", None, s.set("{1}"), n5);

    // x' = -x/(1+x)
    let xp = s.product(x, x1).shift(minus);
    s.step("x' = -x/(1+x) lies outside N(5)", None, xp, out);
    s.step("1 + x' = 1/(1+x) lies in N(5)", Some(("1 - x/(1+x)", "1/(1+x)")), x1, n5);
    let lhs = s.product(x1, n5);
    s.step(
        "1 - x = (1+x)(1 + 2x') lies in N(5)",
        Some(("(1+x)*(1 - 2x/(1+x))", "1 - x")),
        lhs,
        n5,
    );
    s.step("-x lies outside N(5), so -x is in O1", None, x.shift(minus), out);

    // x'' = x/(1+x) = -x' is in O1.
    s.step("x/(1+x) lies outside N(5)", None, s.product(x, x1), out);
    s.step(
        "1 + x/(1+x) = (1+2x)/(1+x) lies in N(5)",
        Some(("1 + x/(1+x)", "(1+2x)/(1+x)")),
        s.product(n5, x1),
        n5,
    );
    s.step(
        "1 + 5x = (1+x)(1 + 4x/(1+x)) lies in N(5)",
        Some(("(1+x)*(1 + 4x/(1+x))", "1 + 5x")),
        s.product(x1, n5),
        n5,
    );
    s.step("5x lies outside N(5), so 5x is in O1", None, x.shift(five), out);

    // z = -2/(1+x)
    s.step(
        "1 - 2/(1+x) = -(1-x)/(1+x) lies in N(5)",
        Some(("1 - 2/(1+x)", "-(1-x)/(1+x)")),
        s.product(n5, x1).shift(minus),
        n5,
    );
    s.step("-2/(1+x) lies outside N(5), so it is in O1", None, x1.shift(two).shift(minus), out);
    s.step("2/(1+x) lies outside N(5), so it is in O1", None, x1.shift(two), out);
    s.step(
        "5 + x = (1 + 4/(1+x))(1+x) lies in N(5)",
        Some(("(1 + 4/(1+x))*(1+x)", "5 + x")),
        s.product(n5, x1),
        n5,
    );
    s.step(
        "1 + x/5 = (5+x)/5 lies in N(5)",
        Some(("1 + x/5", "(5+x)/5")),
        n5.shift(five),
        n5,
    );
    s.step("x/5 lies outside N(5), so x/5 is in O1", None, x.shift(five), out);
    s.steps
}

/// Scaling `x` by a unit `a` with `x/a ~ 2` and swapping `x, y` reduce
/// all 64 class combinations to the boxed cases. `table(x, 1+x, column)`
/// gives the Table 1 cell used for `1 + x/a` and `1 + a*y`.
pub fn coverage_script(table: impl Fn(&str, &str, &str) -> Option<ClassSet>) -> Vec<ScriptStep> {
    let g = ClassGroup::CaseA;
    let boxed = |c1x: &str, cy: &str, c1y: &str| PROP_4_6_CASES.contains(&(c1x, cy, c1y));
    let allowed = |cls: &str| ROWS_A.iter().find(|(c, _)| *c == cls).map(|(_, o)| o.to_vec()).unwrap_or_default();
    // Unit scalar a and the column of 1 + v/a, 1 + a*v.
    let scale = |cx: &str| match cx {
        "2" => ("1", "1", "1"),
        "-2" => ("-1", "1-x", "1-x"),
        "10" => ("5", "1+x/5", "1+5x"),
        _ => ("-5", "1-x/5", "1-5x"),
    };
    let cells = |cv: &str, c1: &str, col: &str| -> Vec<String> {
        if col == "1" {
            vec![c1.to_string()]
        } else {
            table(cv, c1, col).map(|s| s.labels()).unwrap_or_default()
        }
    };
    let mut steps = Vec::new();
    for (cx, ones_x) in ROWS_A {
        for c1x in ones_x {
            for (cy, ones_y) in ROWS_A {
                for c1y in ones_y {
                    let (a, xcol, ycol) = scale(cx);
                    let ca = g.parse(a).expect("unit");
                    let ny = g.parse(cy).expect("class").times(ca).label();
                    let xs = cells(cx, c1x, xcol);
                    let ys = cells(cy, c1y, ycol);
                    let mut reached = Vec::new();
                    let mut holds = !xs.is_empty() && !ys.is_empty();
                    for s1 in &xs {
                        for t1 in &ys {
                            let fits = allowed("2").contains(&s1.as_str()) && allowed(&ny).contains(&t1.as_str());
                            let hit = fits
                                && (boxed(s1, &ny, t1) || (ny == "2" && boxed(t1, "2", s1)));
                            holds &= hit;
                            reached.push(format!("(1+x ~ {s1}, y ~ {ny}, 1+y ~ {t1})"));
                        }
                    }
                    steps.push(ScriptStep {
                        claim: format!("x ~ {cx}, 1+x ~ {c1x}, y ~ {cy}, 1+y ~ {c1y}"),
                        identity: None,
                        detail: format!("x -> x/{a}, y -> {a}y: {}", reached.join(" or ")),
                        holds,
                    });
                }
            }
        }
    }
    steps
}

/// The stored Table 1 cells as a lookup for [`coverage_script`].
pub fn stored_table1(x: &str, one: &str, col: &str) -> Option<ClassSet> {
    table1_cell(x, one, col).and_then(|s| ClassSet::parse(ClassGroup::CaseA, s).ok())
}

/// Consistency of the stored scalar classes with the engine's scalar rule.
pub fn table2_script(scenario: Scenario) -> Vec<ScriptStep> {
    table2_rows()
        .into_iter()
        .filter(|(s, _)| *s == scenario)
        .flat_map(|(_, cells)| cells)
        .map(|c| ScriptStep {
            claim: format!("{} ~ {}", c.expr, c.stored.join(",")),
            identity: None,
            detail: format!("scalar rule gives {{{}}}", c.derived.join(",")),
            holds: c.contained,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normlattice::{lattice, LatticeScenario};

    #[test]
    fn closure_script_holds() {
        let steps = closure_script(&lattice(LatticeScenario::CaseA));
        assert!(steps.iter().all(|s| s.holds), "{steps:#?}");
        assert!(steps.iter().filter(|s| s.identity.is_some()).count() >= 6);
    }

    #[test]
    fn false_identity_is_rejected() {
        assert!(!identity_holds("(1+x)*(1 - 2x/(1+x))", "1 + x"));
        assert!(identity_holds("1 - 2/(1+x)", "-(1-x)/(1+x)"));
    }

    #[test]
    fn coverage_is_complete() {
        let steps = coverage_script(stored_table1);
        assert_eq!(steps.len(), 64);
        assert!(steps.iter().all(|s| s.holds), "{:#?}", steps.iter().filter(|s| !s.holds).collect::<Vec<_>>());
    }

    #[test]
    fn stored_scalar_classes_agree() {
        for s in Scenario::CASE_B {
            let steps = table2_script(s);
            assert_eq!(steps.len(), 3);
            assert!(steps.iter().all(|s| s.holds));
        }
    }
}
