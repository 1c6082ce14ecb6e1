//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` fail for reasons outside the build
//! (see README). The run fails if the set of failing criteria differs from
//! that list in either direction.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use normcomb::demushkin::{abelianization, square_class_rank, Abelianization, DemushkinPresentation};
use normcomb::dyadic::{hilbert_matrix_search, sum_rule_soundness, verify_construction, DEFAULT_PRECISION};
use normcomb::normlattice::hilbert_matrix;
use normcomb::replay::{generate_table, replay, CaseReport, ReplayOptions, TheoremSummary};
use normcomb::{lattice, verify_lattice, ClassGroup, Expr, LatticeScenario, NormLattice, ProofStatus};

const SEED: u64 = 0;
const DEPTH: u32 = 3;
const ORACLE_SAMPLES: usize = 1_000;
const SUM_RULE_PAIRS: usize = 10_000;
const CONSTRUCTION_SAMPLES: usize = 10_000;

const LATTICE_LIMIT: Duration = Duration::from_secs(1);
const REPLAY_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_LIMIT: Duration = Duration::from_secs(30);
const HILBERT_LIMIT: Duration = Duration::from_secs(10);

/// Criteria expected to fail, with the reason printed next to them.
const KNOWN_FAILURES: [(u8, &str); 2] = [
    (2, "case-b-units-3sim1: 2+x is not confined to N(2) by the sum rule when 3 ~ 1"),
    (3, "stored Table 1 cells contradict the derivation and the oracle; Table 3 has a misprinted cell"),
];

const CASE_A_SUITES: [&str; 5] = ["lemma-4.4", "prop-4.6", "lemma-4.8", "appendix-B", "table-1"];
const REPLAY_SUITES: [&str; 10] = [
    "lemma-4.4",
    "cor-4.5",
    "prop-4.6",
    "lemma-4.8",
    "appendix-B",
    "case-b-units-3sim2",
    "case-b-units-3sim1",
    "table-2",
    "case-b-oneminusxy",
    "case-b-residue-2",
];

struct Verdict {
    pass: bool,
    detail: String,
}

fn timed<F: FnOnce() -> Verdict>(limit: Option<Duration>, f: F) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    match limit {
        Some(l) => {
            v.detail.push_str(&format!("; {:.2} s (limit {} s)", took.as_secs_f64(), l.as_secs()));
            v.pass &= took < l;
        }
        None => v.detail.push_str(&format!("; {:.2} s", took.as_secs_f64())),
    }
    v
}

fn opts(samples: usize, l: Option<NormLattice>) -> ReplayOptions {
    ReplayOptions { depth: DEPTH, samples, seed: SEED, precision: DEFAULT_PRECISION, lattice: l }
}

fn run_suites(ids: &[&str], o: &ReplayOptions) -> Vec<(String, Vec<CaseReport>)> {
    ids.iter().map(|id| (id.to_string(), replay(id, o).expect("registered theorem"))).collect()
}

fn lattice_integrity() -> Verdict {
    let a = verify_lattice(&lattice(LatticeScenario::CaseA));
    let big = verify_lattice(&lattice(LatticeScenario::CaseBLarge));
    let small = verify_lattice(&lattice(LatticeScenario::CaseBSmall));
    Verdict {
        pass: a.demushkin_consistent && big.demushkin_consistent && !small.all_index_2,
        detail: format!(
            "case-a demushkin {}, case-b-K demushkin {}, case-b-k index 2 {}",
            a.demushkin_consistent, big.demushkin_consistent, small.all_index_2
        ),
    }
}

fn replay_completeness() -> Verdict {
    let suites = run_suites(&REPLAY_SUITES, &opts(ORACLE_SAMPLES, None));
    let mut pass = true;
    let mut notes = Vec::new();
    let (mut stuck, mut trace_failures) = (0, 0);
    for (id, reports) in &suites {
        let s = TheoremSummary::from_reports(id, reports);
        stuck += s.stuck;
        trace_failures += s.trace_failures;
        if !s.ok() {
            pass = false;
            notes.push(format!("{id} {}/{} proved, {} stuck", s.proved, s.cases, s.stuck));
        }
        let want = match id.as_str() {
            "lemma-4.4" => Some(8),
            "lemma-4.8" => Some(2),
            "appendix-B" => Some(4),
            _ => None,
        };
        if let Some(n) = want {
            if s.cases != n || s.proved != n {
                pass = false;
                notes.push(format!("{id}: {}/{} proved, want {n}", s.proved, s.cases));
            }
        }
        if id == "prop-4.6" {
            let engine = reports.iter().filter(|r| r.trace.is_some()).count();
            let coverage = reports.iter().any(|r| r.script.len() == 64 && r.ok());
            if engine < 14 || !coverage {
                pass = false;
                notes.push(format!("prop-4.6: {engine} engine cases, coverage {coverage}"));
            }
        }
    }
    Verdict {
        pass: pass && stuck == 0 && trace_failures == 0,
        detail: format!("{stuck} stuck, {trace_failures} trace failures{}", prefixed(&notes)),
    }
}

fn prefixed(notes: &[String]) -> String {
    if notes.is_empty() {
        String::new()
    } else {
        format!(" [{}]", notes.join("; "))
    }
}

fn table_containment() -> Verdict {
    let o = opts(0, None);
    let mut notes = Vec::new();
    let mut pass = true;
    for n in [1u8, 3] {
        let t = generate_table(n, &o).expect("table");
        let bad: usize =
            t.branches.iter().flat_map(|b| &b.rows).flat_map(|r| &r.cells).filter(|c| !c.contained).count();
        pass &= t.ok;
        notes.push(format!("table {n}: {bad} cells outside the stored ones"));
        if let Some(same) = t.identical_across_branches {
            notes.push(format!("table {n} identical across branches {same}"));
        }
    }
    Verdict { pass, detail: notes.join(", ") }
}

fn derived(reports: &[CaseReport], case: &str, expr: &str) -> Option<Vec<String>> {
    let e = Expr::parse(expr).ok()?.to_string();
    let r = reports.iter().find(|r| r.case == case)?;
    r.targets.iter().find(|t| t.target == e).map(|t| t.derived.clone())
}

fn pinned_conclusions() -> Verdict {
    let o = opts(0, None);
    let lemma = replay("lemma-4.4", &o).unwrap();
    let prop = replay("prop-4.6", &o).unwrap();
    let unit = replay("appendix-B", &o).unwrap();
    let residue = replay("case-b-residue-2", &o).unwrap();
    let g = ClassGroup::CaseA;
    let within = |got: &Option<Vec<String>>, allowed: &[&str]| {
        got.as_ref().is_some_and(|d| !d.is_empty() && d.iter().all(|c| allowed.contains(&c.as_str())))
    };
    let checks = [
        ("1+2x in {1}", derived(&lemma, "x ~ 2, 1+x ~ 1", "1+2x") == Some(vec!["1".into()])),
        (
            "1-xy in {5}",
            derived(&prop, "x ~ 2, 1+x ~ -5, y ~ 2, 1+y ~ -5", "1-xy") == Some(vec![g.parse("5").unwrap().label()]),
        ),
        ("3+x within {2,10}", within(&derived(&unit, "x ~ -1", "3+x"), &["2", "10"])),
        (
            "2-x in {2} (both branches)",
            residue.iter().filter(|r| r.case == "x ~ c, 1+x ~ -2").count() == 2
                && residue
                    .iter()
                    .filter(|r| r.case == "x ~ c, 1+x ~ -2")
                    .all(|r| r.targets.iter().any(|t| t.target == Expr::parse("2-x").unwrap().to_string() && t.derived == ["2"])),
        ),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Verdict {
        pass: failed.is_empty(),
        detail: if failed.is_empty() { "4/4 match".into() } else { format!("mismatch: {}", failed.join(", ")) },
    }
}

/// Oracle verdict over Case A suites: `(cases, failures)`.
fn oracle_cases(suites: &[(String, Vec<CaseReport>)], samples: usize) -> (usize, usize) {
    let mut cases = 0;
    let mut failures = 0;
    for r in suites.iter().flat_map(|(_, r)| r).filter(|r| r.trace.is_some()) {
        cases += 1;
        let ok = r.oracle.as_ref().is_some_and(|o| o.ok() && o.samples >= samples);
        failures += usize::from(!ok);
    }
    (cases, failures)
}

fn oracle_agreement() -> Verdict {
    let suites = run_suites(&CASE_A_SUITES, &opts(ORACLE_SAMPLES, None));
    let (cases, failures) = oracle_cases(&suites, ORACLE_SAMPLES);
    let sums = sum_rule_soundness(&lattice(LatticeScenario::CaseA), SUM_RULE_PAIRS + SUM_RULE_PAIRS / 10, SEED, DEFAULT_PRECISION);
    let pairs_ok = sums.pairs >= SUM_RULE_PAIRS && sums.violations.is_empty();
    Verdict {
        pass: cases > 0 && failures == 0 && pairs_ok,
        detail: format!(
            "{cases} Case A cases x {ORACLE_SAMPLES} samples, {failures} with violations; sum rule {} pairs, {} violations",
            sums.pairs,
            sums.violations.len()
        ),
    }
}

fn hilbert_ok(l: &NormLattice, search: &[[i8; 8]; 8]) -> bool {
    let m = hilbert_matrix(l);
    let minus = ClassGroup::CaseA.minus_one().bits() as usize;
    let symmetric = (0..8).all(|a| (0..8).all(|b| m[a][b] == m[b][a]));
    let bilinear = (0..8).all(|a| (0..8).all(|b| (0..8).all(|c| m[a][b ^ c] == m[a][b] * m[a][c])));
    &m == search && m[minus][minus] == -1 && symmetric && bilinear
}

fn hilbert_cross_validation() -> Verdict {
    let search = hilbert_matrix_search(DEFAULT_PRECISION).expect("search");
    let pass = hilbert_ok(&lattice(LatticeScenario::CaseA), &search);
    Verdict { pass, detail: "8x8 matrix against the bounded norm search; (-1,-1), symmetry, bilinearity".into() }
}

fn construction_probe() -> Verdict {
    let r = verify_construction(CONSTRUCTION_SAMPLES, SEED, DEFAULT_PRECISION);
    Verdict {
        pass: r.ok() && r.samples == CONSTRUCTION_SAMPLES && r.value_group_index == 2,
        detail: format!(
            "{} samples, {} violations, value group index {}",
            r.samples,
            r.violations.len(),
            r.value_group_index
        ),
    }
}

fn demushkin_invariants() -> Verdict {
    let ab = |p, n, s| abelianization(&DemushkinPresentation::new(p, n, Some(s)));
    let pass = ab(2, 1, 1) == Abelianization { torsion: 2, free_rank: 2 }
        && ab(2, 2, 2) == Abelianization { torsion: 4, free_rank: 3 }
        && square_class_rank(1, 2) == 3;
    Verdict { pass, detail: format!("{}, {}, rank {}", ab(2, 1, 1), ab(2, 2, 2), square_class_rank(1, 2)) }
}

/// Flips every entry of every nontrivial Case A norm group and checks that
/// criterion 6, criterion 5, or the Case A part of criterion 2 notices.
fn mutation_sensitivity() -> Verdict {
    let g = ClassGroup::CaseA;
    let search = hilbert_matrix_search(DEFAULT_PRECISION).expect("search");
    let (mut total, mut by6, mut by5, mut by2) = (0, 0, 0, 0);
    let mut missed = Vec::new();
    for a in g.elements().filter(|a| !a.is_identity()) {
        for b in g.elements() {
            total += 1;
            let mut l = lattice(LatticeScenario::CaseA);
            if l.norm_group(a).contains(b) {
                l.drop_entry(a, b);
            } else {
                l.add_entry(a, b);
            }
            if !hilbert_ok(&l, &search) {
                by6 += 1;
                continue;
            }
            if !sum_rule_soundness(&l, SUM_RULE_PAIRS, SEED, DEFAULT_PRECISION).violations.is_empty() {
                by5 += 1;
                continue;
            }
            let suites = run_suites(&CASE_A_SUITES[..4], &opts(ORACLE_SAMPLES, Some(l)));
            let caught = suites.iter().any(|(id, r)| !TheoremSummary::from_reports(id, r).ok())
                || oracle_cases(&suites, ORACLE_SAMPLES).1 > 0;
            if caught {
                by2 += 1;
            } else {
                missed.push(format!("N({}) flip {}", a.label(), b.label()));
            }
        }
    }
    let mut l = lattice(LatticeScenario::CaseA);
    l.drop_entry(g.parse("-2").unwrap(), g.parse("-5").unwrap());
    let suites = run_suites(&CASE_A_SUITES, &opts(0, Some(l)));
    let hit = suites
        .iter()
        .flat_map(|(_, r)| r)
        .filter(|r| matches!(r.status, ProofStatus::Stuck | ProofStatus::HypothesisImpossible))
        .count();
    Verdict {
        pass: missed.is_empty() && hit >= 1,
        detail: format!(
            "{}/{total} single-entry mutations caught (criterion 6: {by6}, 5: {by5}, 2: {by2}); dropping -5 from N(-2) leaves {hit} cases stuck or impossible{}",
            total - missed.len(),
            prefixed(&missed)
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, Option<Duration>, fn() -> Verdict); 9] = [
        (1, "lattice integrity", Some(LATTICE_LIMIT), lattice_integrity),
        (2, "replay completeness", Some(REPLAY_LIMIT), replay_completeness),
        (3, "table containment", None, table_containment),
        (4, "pinned conclusions", None, pinned_conclusions),
        (5, "oracle agreement", Some(ORACLE_LIMIT), oracle_agreement),
        (6, "Hilbert symbol cross-validation", Some(HILBERT_LIMIT), hilbert_cross_validation),
        (7, "construction probe", None, construction_probe),
        (8, "Demushkin invariants", None, demushkin_invariants),
        (9, "mutation sensitivity", None, mutation_sensitivity),
    ];
    let mut failing = Vec::new();
    for (n, name, limit, f) in criteria {
        let v = timed(limit, f);
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n).map(|(_, why)| *why);
        let tag = match (v.pass, known) {
            (true, _) => "PASS".to_string(),
            (false, Some(why)) => format!("FAIL (known: {why})"),
            (false, None) => "FAIL".to_string(),
        };
        println!("criterion {n} ({name}): {tag}: {}", v.detail);
        if !v.pass {
            failing.push(n);
        }
    }
    let expected: Vec<u8> = KNOWN_FAILURES.iter().map(|(k, _)| *k).collect();
    if failing == expected {
        println!("acceptance: failing criteria {failing:?} are exactly the known ones");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failing:?}, expected exactly {expected:?}");
        ExitCode::FAILURE
    }
}
