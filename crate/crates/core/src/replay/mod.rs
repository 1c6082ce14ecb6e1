//! Scripted replays of the case analyses.
//!
//! Each theorem is a list of cases. A case is either handed to the
//! derivation engine, whose trace is then re-verified by the independent
//! checker and, in Case A, against sampled 2-adic instances, or it is a
//! scripted chain of identities and class computations.

mod cases;
mod crosscheck;
mod script;
mod tables;

use rayon::prelude::*;
use serde::Serialize;

pub use cases::{engine_cases, CaseSpec};
pub use crosscheck::{cross_check, CrossCheck};
pub use script::{closure_script, coverage_script, stored_table1, table2_script, ScriptStep};
pub use tables::{
    generate_table, render_markdown, render_text, table1_cell, table3_cell, TableBranch, TableCell, TableReport, TableRow,
    TABLE1_COLUMNS, TABLE2, TABLE2_COLUMNS, TABLE3_COLUMNS,
};

use crate::derivation::trace::TraceFact;
use crate::derivation::{check_trace, prove_obligations, Expr, ProofStatus, ProofTrace, TraceCheck};
use crate::dyadic::DEFAULT_PRECISION;
use crate::error::ReplayError;
use crate::normlattice::{lattice, LatticeScenario, NormLattice};
use crate::scenario::Scenario;
use crate::squareclass::ClassSet;

/// Theorem ids in replay order, with a one-line statement.
pub const THEOREMS: [(&str, &str); 12] = [
    ("lemma-4.4", "x in O1 implies 1+2x, 1+4x in N(5)"),
    ("cor-4.5", "-1, 5 and 1/5 stabilize O1"),
    ("prop-4.6", "x, y in O1 implies 1-xy in N(5)"),
    ("lemma-4.8", "x ~ 1 with 2x in O1 makes x a multiplier of O1"),
    ("appendix-B", "the residue field has two elements"),
    ("case-b-units-3sim2", "-1, 2, 1/2 stabilize O1 when 3 ~ 2"),
    ("case-b-units-3sim1", "-1, 2, 1/2 stabilize O1 when 3 ~ 1"),
    ("table-1", "classes of 1 + kx for x in O1"),
    ("table-2", "classes of c-2, c-3, c-4"),
    ("table-3", "classes of 1 + kx and 2 +- x for x in O1"),
    ("case-b-oneminusxy", "x, y in O1 implies 1-xy in N(2)"),
    ("case-b-residue-2", "a^2 - 2 +- x and a^2 - 2 lie in N(2)"),
];

#[derive(Clone, Debug)]
pub struct ReplayOptions {
    pub depth: u32,
    /// Sampled instances per Case A case; 0 skips the cross-check.
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    /// Replaces the lattice of every case whose scenario uses it.
    pub lattice: Option<NormLattice>,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions { depth: 3, samples: 1000, seed: 0, precision: DEFAULT_PRECISION, lattice: None }
    }
}

impl ReplayOptions {
    fn lattice_for(&self, s: LatticeScenario) -> NormLattice {
        match &self.lattice {
            Some(l) if l.scenario() == s => l.clone(),
            _ => lattice(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetReport {
    pub target: String,
    pub goal: Vec<String>,
    pub derived: Vec<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub expr: String,
    pub within: Vec<String>,
    pub derived: Vec<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub theorem_id: String,
    pub case: String,
    pub scenario: Scenario,
    pub hypotheses: Vec<TraceFact>,
    /// Earlier results assumed by the case.
    pub facts: Vec<TraceFact>,
    pub targets: Vec<TargetReport>,
    pub expectations: Vec<Expectation>,
    pub status: ProofStatus,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub script: Vec<ScriptStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_check: Option<TraceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<CrossCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ProofTrace>,
}

impl CaseReport {
    pub fn trace_ok(&self) -> bool {
        self.trace_check.as_ref().is_none_or(|c| c.valid && (self.status == ProofStatus::Stuck || c.closed))
    }

    pub fn oracle_ok(&self) -> bool {
        self.oracle.as_ref().is_none_or(|o| o.ok())
    }

    pub fn ok(&self) -> bool {
        self.status != ProofStatus::Stuck
            && self.trace_ok()
            && self.oracle_ok()
            && self.targets.iter().all(|t| t.holds)
            && self.expectations.iter().all(|e| e.holds)
            && self.script.iter().all(|s| s.holds)
    }
}

fn fact(g: crate::squareclass::ClassGroup, e: &str, s: &str) -> Result<TraceFact, ReplayError> {
    Ok(TraceFact::new(&Expr::parse(e).map_err(crate::error::DerivationError::from)?, ClassSet::parse(g, s).map_err(crate::error::DerivationError::from)?))
}

/// Runs one engine case: proof search, trace check, expectations and,
/// in Case A, the sampled cross-check.
pub fn run_case(spec: &CaseSpec, opts: &ReplayOptions) -> Result<CaseReport, ReplayError> {
    let g = spec.scenario.group();
    let kb = spec.knowledge_base(opts.lattice.as_ref())?;
    let obligations = spec.obligations()?;
    let result = prove_obligations(&kb, &obligations, opts.depth);
    let check = check_trace(&result.trace, kb.lattice());

    let targets: Vec<TargetReport> = obligations
        .iter()
        .zip(&result.target_sets)
        .map(|(o, d)| TargetReport {
            target: o.target.to_string(),
            goal: o.goal.labels(),
            derived: d.labels(),
            holds: d.is_subset(o.goal),
        })
        .collect();
    let derived_set = |e: &Expr| -> Option<ClassSet> {
        obligations
            .iter()
            .position(|o| &o.target == e)
            .map(|i| result.target_sets[i])
            .or_else(|| result.root_kb.set_of(e))
    };
    let mut expectations = Vec::new();
    for (e, s) in &spec.expected {
        let e = Expr::parse(e).map_err(crate::error::DerivationError::from)?;
        let within = ClassSet::parse(g, s).map_err(crate::error::DerivationError::from)?;
        let d = derived_set(&e).unwrap_or(g.full_set());
        expectations.push(Expectation {
            expr: e.to_string(),
            within: within.labels(),
            derived: d.labels(),
            holds: !d.is_empty() && d.is_subset(within),
        });
    }

    let oracle = (spec.scenario == Scenario::CaseA && opts.samples > 0).then(|| {
        let mut sets: Vec<(Expr, ClassSet)> = result.root_kb.facts().map(|(e, s)| (e.clone(), s)).collect();
        sets.extend(obligations.iter().map(|o| o.target.clone()).zip(result.target_sets.iter().copied()));
        cross_check(&kb, &sets, opts.samples, opts.seed, opts.precision)
    });

    Ok(CaseReport {
        theorem_id: spec.theorem.to_string(),
        case: spec.label.clone(),
        scenario: spec.scenario,
        hypotheses: spec.hypotheses.iter().map(|(e, s)| fact(g, e, s)).collect::<Result<_, _>>()?,
        facts: spec.facts.iter().map(|(e, s)| fact(g, e, s)).collect::<Result<_, _>>()?,
        targets,
        expectations,
        status: result.status,
        script: Vec::new(),
        trace_check: Some(check),
        oracle,
        trace: Some(result.trace),
    })
}

fn scripted(theorem: &str, case: &str, scenario: Scenario, steps: Vec<ScriptStep>) -> CaseReport {
    let ok = !steps.is_empty() && steps.iter().all(|s| s.holds);
    CaseReport {
        theorem_id: theorem.to_string(),
        case: case.to_string(),
        scenario,
        hypotheses: Vec::new(),
        facts: Vec::new(),
        targets: Vec::new(),
        expectations: Vec::new(),
        status: if ok { ProofStatus::Proved } else { ProofStatus::Stuck },
        script: steps,
        trace_check: None,
        oracle: None,
        trace: None,
    }
}

/// All cases of one theorem, in a fixed order.
pub fn replay(id: &str, opts: &ReplayOptions) -> Result<Vec<CaseReport>, ReplayError> {
    if !THEOREMS.iter().any(|(t, _)| *t == id) {
        return Err(ReplayError::UnknownTheorem(id.to_string()));
    }
    let mut reports = match engine_cases(id) {
        Some(specs) => specs.par_iter().map(|s| run_case(s, opts)).collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    match id {
        "cor-4.5" => {
            let l = opts.lattice_for(LatticeScenario::CaseA);
            reports.push(scripted(id, "x in O1", Scenario::CaseA, closure_script(&l)));
        }
        "prop-4.6" => {
            let no_samples = ReplayOptions { samples: 0, ..opts.clone() };
            let rows = cases::table_1()
                .par_iter()
                .map(|s| run_case(s, &no_samples))
                .collect::<Result<Vec<_>, _>>()?;
            let derived = |x: &str, one: &str, col: &str| -> Option<ClassSet> {
                let case = format!("x ~ {x}, 1+x ~ {one}");
                let target = Expr::parse(col).ok()?.to_string();
                let r = rows.iter().find(|r| r.case == case)?;
                let t = r.targets.iter().find(|t| t.target == target)?;
                ClassSet::parse_labels(crate::squareclass::ClassGroup::CaseA, &t.derived).ok()
            };
            reports.push(scripted(
                id,
                "reduction of all 64 class combinations",
                Scenario::CaseA,
                coverage_script(derived),
            ));
        }
        "table-2" => {
            for s in [Scenario::CaseB3Is2, Scenario::CaseB3Is1] {
                reports.push(scripted(id, &format!("3 ~ {}", s.three().label()), s, table2_script(s)));
            }
        }
        _ => {}
    }
    Ok(reports)
}

/// Like [`replay`] with the given lattice in place of the stored one.
pub fn replay_with_lattice(id: &str, l: NormLattice, opts: &ReplayOptions) -> Result<Vec<CaseReport>, ReplayError> {
    let opts = ReplayOptions { lattice: Some(l), ..opts.clone() };
    replay(id, &opts)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TheoremSummary {
    pub id: String,
    pub cases: usize,
    pub proved: usize,
    pub stuck: usize,
    pub impossible: usize,
    pub trace_failures: usize,
    pub oracle_failures: usize,
    pub failed_checks: usize,
}

impl TheoremSummary {
    pub fn from_reports(id: &str, reports: &[CaseReport]) -> Self {
        let mut s = TheoremSummary { id: id.to_string(), cases: reports.len(), ..Default::default() };
        for r in reports {
            match r.status {
                ProofStatus::Proved => s.proved += 1,
                ProofStatus::Stuck => s.stuck += 1,
                ProofStatus::HypothesisImpossible => s.impossible += 1,
            }
            s.trace_failures += usize::from(!r.trace_ok());
            s.oracle_failures += usize::from(!r.oracle_ok());
            s.failed_checks += usize::from(r.status != ProofStatus::Stuck && !r.ok() && r.trace_ok() && r.oracle_ok());
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.stuck == 0 && self.trace_failures == 0 && self.oracle_failures == 0 && self.failed_checks == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplaySummary {
    pub theorems: Vec<TheoremSummary>,
    pub reports: Vec<CaseReport>,
    pub ok: bool,
    /// Wall time; left out of JSON so reruns compare byte for byte.
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

/// Every theorem, run in parallel and merged in registry order.
pub fn replay_all(opts: &ReplayOptions) -> Result<ReplaySummary, ReplayError> {
    let ids: Vec<&str> = THEOREMS.iter().map(|(id, _)| *id).collect();
    replay_selected(&ids, opts)
}

/// The given theorems, merged in the order given. An empty list gives an
/// empty summary that counts as a success.
pub fn replay_selected(ids: &[&str], opts: &ReplayOptions) -> Result<ReplaySummary, ReplayError> {
    let start = std::time::Instant::now();
    let per: Vec<Vec<CaseReport>> = ids.par_iter().map(|id| replay(id, opts)).collect::<Result<Vec<_>, _>>()?;
    let theorems: Vec<TheoremSummary> =
        ids.iter().zip(&per).map(|(id, r)| TheoremSummary::from_reports(id, r)).collect();
    let ok = theorems.iter().all(|t| t.ok());
    Ok(ReplaySummary { theorems, reports: per.into_iter().flatten().collect(), ok, elapsed: start.elapsed() })
}

fn set_text(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// Plain-text rendering of one case.
pub fn render_case(r: &CaseReport) -> String {
    let mut out = format!("[{}] {} ({}): {}\n", r.theorem_id, r.case, r.scenario.name(), r.status.name());
    for t in &r.targets {
        let mark = if t.holds { "⊆" } else { "⊄" };
        out.push_str(&format!("  {} ∈ {} {mark} {}\n", t.target, set_text(&t.derived), set_text(&t.goal)));
    }
    for e in &r.expectations {
        out.push_str(&format!(
            "  expected {} ⊆ {}: derived {} [{}]\n",
            e.expr,
            set_text(&e.within),
            set_text(&e.derived),
            if e.holds { "ok" } else { "FAIL" }
        ));
    }
    for s in &r.script {
        out.push_str(&format!("  [{}] {}", if s.holds { "ok" } else { "FAIL" }, s.claim));
        if let Some(id) = &s.identity {
            out.push_str(&format!("; {id}"));
        }
        out.push_str(&format!("; {}\n", s.detail));
    }
    if let Some(c) = &r.trace_check {
        out.push_str(&format!(
            "  trace: {} steps checked, valid {}, closed {}\n",
            c.steps_checked, c.valid, c.closed
        ));
        for e in &c.errors {
            out.push_str(&format!("    {e}\n"));
        }
    }
    if let Some(o) = &r.oracle {
        out.push_str(&format!(
            "  oracle: {}/{} samples, {} sets checked, {} violations, {} skipped\n",
            o.samples, o.requested, o.checked, o.violations, o.skipped
        ));
        for m in &o.messages {
            out.push_str(&format!("    {m}\n"));
        }
    }
    out
}

pub fn render_summary(s: &ReplaySummary) -> String {
    let mut out = String::new();
    for t in &s.theorems {
        out.push_str(&format!(
            "{:<20} cases {:>3}  proved {:>3}  impossible {:>2}  stuck {:>2}  trace-fail {:>2}  oracle-fail {:>2}  {}\n",
            t.id,
            t.cases,
            t.proved,
            t.impossible,
            t.stuck,
            t.trace_failures,
            t.oracle_failures,
            if t.ok() { "ok" } else { "FAIL" }
        ));
    }
    out.push_str(&format!("overall: {} ({:.2} s)\n", if s.ok { "ok" } else { "FAIL" }, s.elapsed.as_secs_f64()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squareclass::ClassGroup;

    fn quick() -> ReplayOptions {
        ReplayOptions { samples: 50, ..Default::default() }
    }

    fn target<'a>(r: &'a CaseReport, e: &str) -> &'a TargetReport {
        let e = Expr::parse(e).unwrap().to_string();
        r.targets.iter().find(|t| t.target == e).unwrap()
    }

    #[test]
    fn lemma_4_4_proves_all_cases() {
        let reports = replay("lemma-4.4", &quick()).unwrap();
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(|r| r.status == ProofStatus::Proved && r.ok()));
        let first = reports.iter().find(|r| r.case == "x ~ 2, 1+x ~ 1").unwrap();
        assert_eq!(target(first, "1+2x").derived, vec!["1"]);
        let four = first.expectations.iter().find(|e| e.expr == Expr::parse("1+4x").unwrap().to_string()).unwrap();
        assert!(four.holds);
    }

    #[test]
    fn prop_4_6_pinned_case() {
        let reports = replay("prop-4.6", &ReplayOptions { samples: 0, ..Default::default() }).unwrap();
        assert_eq!(reports.len(), 16);
        let r = reports.iter().find(|r| r.case == "x ~ 2, 1+x ~ -5, y ~ 2, 1+y ~ -5").unwrap();
        assert_eq!(target(r, "1-xy").derived, vec!["5"]);
        let coverage = reports.last().unwrap();
        assert_eq!(coverage.script.len(), 64);
        assert!(coverage.ok());
    }

    #[test]
    fn residue_case_b_pinned() {
        let reports = replay("case-b-residue-2", &quick()).unwrap();
        assert_eq!(reports.len(), 6);
        assert!(reports.iter().all(|r| r.ok()));
        let r = reports.iter().find(|r| r.case == "x ~ c, 1+x ~ -2").unwrap();
        assert_eq!(target(r, "2-x").derived, vec!["2"]);
    }

    #[test]
    fn unknown_theorem() {
        assert!(matches!(replay("lemma-9.9", &quick()), Err(ReplayError::UnknownTheorem(_))));
    }

    #[test]
    fn empty_selection_is_a_success() {
        let s = replay_selected(&[], &quick()).unwrap();
        assert!(s.theorems.is_empty() && s.reports.is_empty() && s.ok);
    }

    #[test]
    fn case_b_replays_skip_the_oracle() {
        for r in replay("case-b-oneminusxy", &quick()).unwrap() {
            assert!(r.oracle.is_none());
            assert!(r.trace_ok());
        }
    }

    #[test]
    fn dropping_an_entry_breaks_a_replay() {
        let mut l = lattice(LatticeScenario::CaseA);
        let g = ClassGroup::CaseA;
        l.drop_entry(g.parse("-2").unwrap(), g.parse("-5").unwrap());
        let opts = ReplayOptions { samples: 200, ..Default::default() };
        let bad = ["lemma-4.4", "prop-4.6", "lemma-4.8", "appendix-B", "table-1"]
            .iter()
            .flat_map(|id| replay_with_lattice(id, l.clone(), &opts).unwrap())
            .filter(|r| r.status != ProofStatus::Proved || !r.ok())
            .count();
        assert!(bad >= 1);
    }

    #[test]
    fn summary_json_is_stable() {
        let opts = quick();
        let a = replay_selected(&["lemma-4.8", "table-2"], &opts).unwrap();
        let b = replay_selected(&["lemma-4.8", "table-2"], &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
