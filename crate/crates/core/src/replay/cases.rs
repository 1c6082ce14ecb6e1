//! Hypotheses, earlier results, tracked expressions and goals of every
//! case handled by the engine.

use crate::derivation::{KnowledgeBase, Obligation};
use crate::error::DerivationError;
use crate::normlattice::NormLattice;
use crate::scenario::Scenario;
use crate::squareclass::ClassSet;

use super::tables::{table1_cell, table3_cell, TABLE1_COLUMNS, TABLE3_COLUMNS};

pub(crate) const N5: &str = "{1,-1,5,-5}";
pub(crate) const NOT_N5: &str = "{2,-2,10,-10}";
pub(crate) const N2: &str = "{1,-1,2,-2}";

/// Classes of `x` outside `T` with the two admissible classes of `1 + x`.
pub(crate) const ROWS_A: [(&str, [&str; 2]); 4] =
    [("2", ["1", "-5"]), ("-2", ["1", "-1"]), ("10", ["1", "-5"]), ("-10", ["1", "-1"])];
pub(crate) const ROWS_B: [(&str, [&str; 2]); 4] =
    [("c", ["1", "-2"]), ("-c", ["1", "-1"]), ("2c", ["1", "-2"]), ("-2c", ["1", "-1"])];

#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub theorem: &'static str,
    pub label: String,
    pub scenario: Scenario,
    /// The assumptions defining the case.
    pub hypotheses: Vec<(String, String)>,
    /// Results established elsewhere and used here.
    pub facts: Vec<(String, String)>,
    /// Expressions followed without any prior information.
    pub tracked: Vec<String>,
    pub obligations: Vec<(String, String)>,
    /// Sharper sets the derivation is expected to reach, `(expr, superset)`.
    pub expected: Vec<(String, String)>,
}

impl CaseSpec {
    fn new(theorem: &'static str, scenario: Scenario, label: String) -> Self {
        CaseSpec {
            theorem,
            label,
            scenario,
            hypotheses: Vec::new(),
            facts: Vec::new(),
            tracked: Vec::new(),
            obligations: Vec::new(),
            expected: Vec::new(),
        }
    }

    fn hyp(mut self, e: &str, s: &str) -> Self {
        self.hypotheses.push((e.into(), braces(s)));
        self
    }

    fn fact(mut self, e: &str, s: &str) -> Self {
        self.facts.push((e.into(), braces(s)));
        self
    }

    fn track(mut self, e: &str) -> Self {
        self.tracked.push(e.into());
        self
    }

    fn goal(mut self, e: &str, s: &str) -> Self {
        self.obligations.push((e.into(), braces(s)));
        self
    }

    fn expect(mut self, e: &str, s: &str) -> Self {
        self.expected.push((e.into(), braces(s)));
        self
    }

    pub fn knowledge_base(&self, lattice: Option<&NormLattice>) -> Result<KnowledgeBase, DerivationError> {
        let mut kb = match lattice {
            Some(l) if l.scenario() == self.scenario.lattice_scenario() => {
                KnowledgeBase::with_lattice(self.scenario, l.clone())
            }
            _ => KnowledgeBase::new(self.scenario),
        };
        for (e, s) in self.hypotheses.iter().chain(&self.facts) {
            kb.assume_str(e, s)?;
        }
        for e in &self.tracked {
            kb.track(crate::derivation::Expr::parse(e)?);
        }
        Ok(kb)
    }

    pub fn obligations(&self) -> Result<Vec<Obligation>, DerivationError> {
        let g = self.scenario.group();
        self.obligations
            .iter()
            .map(|(e, s)| Ok(Obligation::new(crate::derivation::Expr::parse(e)?, ClassSet::parse(g, s)?)))
            .collect()
    }
}

fn braces(s: &str) -> String {
    if s.starts_with('{') {
        s.to_string()
    } else {
        format!("{{{s}}}")
    }
}

/// `1 + k*v` written for the parser; `k` may be `-1/5` or `-(c-2)`.
pub(crate) fn one_plus(k: &str, v: &str) -> String {
    match k {
        "1" => format!("1+{v}"),
        "-1" => format!("1-{v}"),
        _ if k.starts_with('-') => format!("1{k}{v}"),
        _ => format!("1+{k}{v}"),
    }
}

fn case_label(parts: &[(&str, &str)]) -> String {
    parts.iter().map(|(e, c)| format!("{e} ~ {c}")).collect::<Vec<_>>().join(", ")
}

/// `1 + 2x` and `1 + 4x` lie in `N(5)` for every `x` outside `T` with `1 + x` inside.
pub fn lemma_4_4() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for (cx, ones) in ROWS_A {
        for c1 in ones {
            let mut s = CaseSpec::new("lemma-4.4", Scenario::CaseA, case_label(&[("x", cx), ("1+x", c1)]))
                .hyp("x", cx)
                .hyp("1+x", c1);
            for k in ["-1", "3", "-3", "-2", "-4", "5", "-5"] {
                s = s.track(&one_plus(k, "x"));
            }
            s = s.goal("1+2x", N5).goal("1+4x", N5);
            if (cx, c1) == ("2", "1") {
                s = s.expect("1+2x", "1").expect("1+4x", "{1,-5}");
            }
            out.push(s);
        }
    }
    out
}

/// The consequences of `x` lying in `O1`: `1 + kx` in `N(5)` for
/// `k = ±1, ±2, ±4, ±5, ±1/5`.
fn o1_facts_a(mut s: CaseSpec, v: &str) -> CaseSpec {
    for k in ["-1", "2", "-2", "4", "-4", "5", "-5", "1/5", "-1/5"] {
        s = s.fact(&one_plus(k, v), N5);
    }
    s
}

/// Each stored cell of the row is derived from the row hypotheses.
pub fn table_1() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for (cx, ones) in ROWS_A {
        for c1 in ones {
            let mut s = CaseSpec::new("table-1", Scenario::CaseA, case_label(&[("x", cx), ("1+x", c1)]))
                .hyp("x", cx)
                .hyp("1+x", c1);
            s = o1_facts_a(s, "x");
            s = s.track("1+3x").track("1-3x");
            for (col, k) in TABLE1_COLUMNS {
                s = s.goal(&one_plus(k, "x"), table1_cell(cx, c1, col).expect("stored row"));
            }
            out.push(s);
        }
    }
    out
}

/// The boxed cases `(1+x, y, 1+y)` with `x ~ 2`.
pub(crate) const PROP_4_6_CASES: [(&str, &str, &str); 15] = [
    ("1", "10", "1"),
    ("1", "10", "-5"),
    ("1", "-10", "1"),
    ("1", "-10", "-1"),
    ("-5", "10", "1"),
    ("-5", "10", "-5"),
    ("-5", "-10", "1"),
    ("-5", "-10", "-1"),
    ("1", "2", "1"),
    ("1", "2", "-5"),
    ("1", "-2", "1"),
    ("1", "-2", "-1"),
    ("-5", "2", "-5"),
    ("-5", "-2", "1"),
    ("-5", "-2", "-1"),
];

/// `1 - xy` lies in `N(5)` for `x, y` in `O1`.
pub fn prop_4_6() -> Vec<CaseSpec> {
    PROP_4_6_CASES
        .iter()
        .map(|&(c1x, cy, c1y)| {
            let label = case_label(&[("x", "2"), ("1+x", c1x), ("y", cy), ("1+y", c1y)]);
            let mut s = CaseSpec::new("prop-4.6", Scenario::CaseA, label)
                .hyp("x", "2")
                .hyp("1+x", c1x)
                .hyp("y", cy)
                .hyp("1+y", c1y);
            s = o1_facts_a(s, "x");
            s = o1_facts_a(s, "y");
            s = s.goal("1-xy", N5);
            if (c1x, cy, c1y) == ("-5", "2", "-5") {
                s = s.expect("1-xy", "5");
            }
            s
        })
        .collect()
}

/// `x ~ 1` with `2x` in `O1` and `y ~ 2` in `O1`: `5xy` is in `O1`.
pub fn lemma_4_8() -> Vec<CaseSpec> {
    ["1", "-5"]
        .iter()
        .map(|c| {
            let label = case_label(&[("x", "1"), ("1+2x", c), ("y", "2")]);
            let mut s = CaseSpec::new("lemma-4.8", Scenario::CaseA, label)
                .hyp("x", "1")
                .hyp("1+2x", c)
                .hyp("y", "2")
                .hyp("1+y", "{1,-5}");
            s = o1_facts_a(s, "y");
            s = s.fact("1+2xy", N5).fact("1+4xy", N5);
            s.track("1+xy").goal("1+5xy", N5)
        })
        .collect()
}

/// A unit `x` (`x`, `1 + 2x`, `2 + x` in `N(5)`) has `1 + x` or `3 + x`
/// outside `N(5)`, so the residue field has two elements.
pub fn appendix_b() -> Vec<CaseSpec> {
    [("1", "1+x", None), ("-1", "3+x", Some("{2,10}")), ("5", "1+x", None), ("-5", "3+x", Some("{-2,-10}"))]
        .iter()
        .map(|&(c, target, pinned)| {
            let mut s = CaseSpec::new("appendix-B", Scenario::CaseA, case_label(&[("x", c)]))
                .hyp("x", c)
                .fact("1+2x", N5)
                .fact("2+x", N5);
            for t in ["1+x", "3+x"] {
                if t != target {
                    s = s.track(t);
                }
            }
            s = s.goal(target, NOT_N5);
            if let Some(p) = pinned {
                s = s.expect(target, p);
            }
            s
        })
        .collect()
}

fn units_b(theorem: &'static str, scenario: Scenario) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for (cx, ones) in ROWS_B {
        for c1 in ones {
            let mut s = CaseSpec::new(theorem, scenario, case_label(&[("x", cx), ("1+x", c1)]))
                .hyp("x", cx)
                .hyp("1+x", c1);
            for k in ["2", "-2", "3", "-3", "4", "-4", "1/2", "-1/2"] {
                s = s.track(&one_plus(k, "x"));
            }
            out.push(track_c_family(s).goal("1-x", N2).goal("1+2x", N2).goal("2+x", N2));
        }
    }
    out
}

/// Tracks `1 ± (c-j)x` for `j = 0..4`.
fn track_c_family(mut s: CaseSpec) -> CaseSpec {
    for j in 0..=4 {
        let k = if j == 0 { "c".to_string() } else { format!("(c-{j})") };
        s = s.track(&one_plus(&k, "x")).track(&one_plus(&format!("-{k}"), "x"));
    }
    s
}

/// `-1`, `2` and `1/2` stabilize `O1` when `3 ~ 2`.
pub fn case_b_units_3sim2() -> Vec<CaseSpec> {
    units_b("case-b-units-3sim2", Scenario::CaseB3Is2)
}

/// `-1`, `2` and `1/2` stabilize `O1` when `3 ~ 1`.
pub fn case_b_units_3sim1() -> Vec<CaseSpec> {
    units_b("case-b-units-3sim1", Scenario::CaseB3Is1)
}

/// `1 + kx` in `N(2)` for `k = ±1, ±2` and `2 ± x` in `N(2)`.
fn o1_facts_b(mut s: CaseSpec, v: &str) -> CaseSpec {
    for k in ["-1", "2", "-2"] {
        s = s.fact(&one_plus(k, v), N2);
    }
    s.fact(&format!("2+{v}"), N2).fact(&format!("2-{v}"), N2)
}

fn two_plus(k: &str, v: &str) -> String {
    match k {
        "1/2" => format!("2+{v}"),
        "-1/2" => format!("2-{v}"),
        _ => one_plus(k, v),
    }
}

pub fn table_3() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for scenario in [Scenario::CaseB3Is2, Scenario::CaseB3Is1] {
        for (cx, ones) in ROWS_B {
            for c1 in ones {
                let mut s = CaseSpec::new("table-3", scenario, case_label(&[("x", cx), ("1+x", c1)]))
                    .hyp("x", cx)
                    .hyp("1+x", c1);
                s = o1_facts_b(s, "x");
                for k in ["3", "-3", "4", "-4"] {
                    s = s.track(&one_plus(k, "x"));
                }
                for (col, k) in TABLE3_COLUMNS {
                    s = s.goal(&two_plus(k, "x"), table3_cell(cx, c1, col).expect("stored row"));
                }
                out.push(s);
            }
        }
    }
    out
}

/// The thirteen boxed cases and the two `y ~ 2c` cases, `(1+x, y, 1+y)`
/// with `x ~ c`.
pub(crate) const ONE_MINUS_XY_B: [(&str, &str, &str); 15] = [
    ("1", "c", "1"),
    ("1", "c", "-2"),
    ("1", "-c", "1"),
    ("1", "-c", "-1"),
    ("1", "2c", "1"),
    ("1", "2c", "-2"),
    ("1", "-2c", "1"),
    ("1", "-2c", "-1"),
    ("-2", "c", "-2"),
    ("-2", "-c", "1"),
    ("-2", "-c", "-1"),
    ("-2", "-2c", "1"),
    ("-2", "-2c", "-1"),
    ("-2", "2c", "1"),
    ("-2", "2c", "-2"),
];

pub fn case_b_oneminusxy() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for scenario in [Scenario::CaseB3Is2, Scenario::CaseB3Is1] {
        for &(c1x, cy, c1y) in &ONE_MINUS_XY_B {
            let label = case_label(&[("x", "c"), ("1+x", c1x), ("y", cy), ("1+y", c1y)]);
            let mut s = CaseSpec::new("case-b-oneminusxy", scenario, label)
                .hyp("x", "c")
                .hyp("1+x", c1x)
                .hyp("y", cy)
                .hyp("1+y", c1y);
            s = o1_facts_b(s, "x");
            s = o1_facts_b(s, "y");
            out.push(s.goal("1-xy", N2));
        }
    }
    out
}

/// `a^2 - 2 + x` (or `a^2 - 2 - x` after replacing `x` by `-x`) and
/// `a^2 - 2` lie in `N(2)` for `x ~ c` in `O1` and any `a`.
pub fn case_b_residue_2() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for scenario in [Scenario::CaseB3Is2, Scenario::CaseB3Is1] {
        for (c1, c1m) in [("-2", None), ("1", Some("1")), ("1", Some("-1"))] {
            let mut parts = vec![("x", "c"), ("1+x", c1)];
            if let Some(m) = c1m {
                parts.push(("1-x", m));
            }
            let mut s = CaseSpec::new("case-b-residue-2", scenario, case_label(&parts)).hyp("x", "c").hyp("1+x", c1);
            if let Some(m) = c1m {
                s = s.hyp("1-x", m);
            }
            s = o1_facts_b(s, "x").track("a");
            let flip = c1m == Some("-1");
            let (target, partner) = if flip { ("a^2-2-x", "2+x") } else { ("a^2-2+x", "2-x") };
            s = s.goal(target, N2).goal("a^2-2", N2).goal(partner, N2);
            if c1 == "-2" {
                s = s.expect("2-x", "2");
            }
            out.push(s);
        }
    }
    out
}

/// Every engine-driven case of a theorem, `None` for scripted items.
pub fn engine_cases(theorem: &str) -> Option<Vec<CaseSpec>> {
    Some(match theorem {
        "lemma-4.4" => lemma_4_4(),
        "prop-4.6" => prop_4_6(),
        "lemma-4.8" => lemma_4_8(),
        "appendix-B" => appendix_b(),
        "case-b-units-3sim2" => case_b_units_3sim2(),
        "case-b-units-3sim1" => case_b_units_3sim1(),
        "table-1" => table_1(),
        "table-3" => table_3(),
        "case-b-oneminusxy" => case_b_oneminusxy(),
        "case-b-residue-2" => case_b_residue_2(),
        _ => return None,
    })
}
