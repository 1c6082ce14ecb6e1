//! Norm-group lattices `a -> N(a)` per scenario, their well-formedness checks,
//! the sum rule and the Hilbert symbol read off a lattice.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::ClassError;
use crate::squareclass::{ClassGroup, ClassSet, SquareClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeScenario {
    /// The 2-adic lattice with basis `(-1, 2, 5)`.
    #[serde(rename = "case-a")]
    CaseA,
    /// Case B over the subfield `k`; not of Demushkin type.
    #[serde(rename = "case-b-k")]
    CaseBSmall,
    /// Case B over `K`.
    #[serde(rename = "case-b-K")]
    CaseBLarge,
}

impl LatticeScenario {
    pub const ALL: [LatticeScenario; 3] =
        [LatticeScenario::CaseA, LatticeScenario::CaseBSmall, LatticeScenario::CaseBLarge];

    pub fn name(self) -> &'static str {
        match self {
            LatticeScenario::CaseA => "case-a",
            LatticeScenario::CaseBSmall => "case-b-k",
            LatticeScenario::CaseBLarge => "case-b-K",
        }
    }

    pub fn group(self) -> ClassGroup {
        match self {
            LatticeScenario::CaseA => ClassGroup::CaseA,
            _ => ClassGroup::CaseB,
        }
    }
}

impl fmt::Display for LatticeScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeScenario {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "case-a" => Ok(LatticeScenario::CaseA),
            "case-b-k" => Ok(LatticeScenario::CaseBSmall),
            "case-b-K" => Ok(LatticeScenario::CaseBLarge),
            _ => Err(ClassError::UnknownLabel(s.to_string())),
        }
    }
}

/// `N(a)` for every class `a`; `N(1)` is the whole group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormLattice {
    scenario: LatticeScenario,
    masks: [u8; 8],
}

// Case A groups by exponent vector of `a`, as masks over exponent vectors.
const CASE_A_TABLE: [(&str, [&str; 4]); 7] = [
    ("-1", ["1", "2", "5", "10"]),
    ("2", ["1", "-1", "2", "-2"]),
    ("-2", ["1", "2", "-5", "-10"]),
    ("5", ["1", "-1", "5", "-5"]),
    ("-5", ["1", "-2", "5", "-10"]),
    ("10", ["1", "-1", "10", "-10"]),
    ("-10", ["1", "-2", "-5", "10"]),
];

impl NormLattice {
    pub fn scenario(&self) -> LatticeScenario {
        self.scenario
    }

    pub fn group(&self) -> ClassGroup {
        self.scenario.group()
    }

    /// `N(a)`.
    pub fn norm_group(&self, a: SquareClass) -> ClassSet {
        assert_eq!(a.group(), self.group(), "square class from a different group");
        ClassSet::from_mask(self.group(), self.masks[a.bits() as usize])
    }

    pub(crate) fn mask(&self, a_bits: u8) -> u8 {
        self.masks[a_bits as usize]
    }

    /// Removes class `b` from `N(a)`; used by mutation tests.
    pub fn drop_entry(&mut self, a: SquareClass, b: SquareClass) {
        self.masks[a.bits() as usize] &= !(1 << b.bits());
    }

    /// Adds class `b` to `N(a)`; used by mutation tests.
    pub fn add_entry(&mut self, a: SquareClass, b: SquareClass) {
        self.masks[a.bits() as usize] |= 1 << b.bits();
    }

    pub fn from_masks(scenario: LatticeScenario, masks: [u8; 8]) -> Self {
        NormLattice { scenario, masks }
    }

    pub fn masks(&self) -> [u8; 8] {
        self.masks
    }
}

pub fn lattice(scenario: LatticeScenario) -> NormLattice {
    let group = scenario.group();
    let mut masks = [0u8; 8];
    masks[0] = 0xFF;
    for (a, members) in CASE_A_TABLE {
        // Case B relabels the third generator 5 -> c; bit patterns are shared.
        let a = ClassGroup::CaseA.parse(a).expect("static label").bits();
        masks[a as usize] = ClassSet::parse_labels(ClassGroup::CaseA, &members).expect("static labels").mask();
    }
    if scenario == LatticeScenario::CaseBSmall {
        let shrink = [("-2", ["1", "2"]), ("-c", ["1", "c"]), ("-2c", ["1", "2c"])];
        for (a, members) in shrink {
            let a = group.parse(a).expect("static label").bits();
            masks[a as usize] = ClassSet::parse_labels(group, &members).expect("static labels").mask();
        }
    }
    NormLattice { scenario, masks }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub scenario: LatticeScenario,
    pub all_subgroups: bool,
    pub reciprocity_holds: bool,
    pub all_index_2: bool,
    pub injective: bool,
    pub demushkin_consistent: bool,
    /// Human-readable descriptions of each failed check.
    pub failures: Vec<String>,
}

pub fn verify_lattice(l: &NormLattice) -> LatticeReport {
    let g = l.group();
    let nontrivial: Vec<SquareClass> = g.elements().filter(|a| !a.is_identity()).collect();
    let mut failures = Vec::new();

    let mut all_subgroups = true;
    for a in g.elements() {
        if !l.norm_group(a).is_subgroup() {
            all_subgroups = false;
            failures.push(format!("N({a}) = {} is not a subgroup", l.norm_group(a)));
        }
    }

    let mut reciprocity_holds = true;
    for &a in &nontrivial {
        for &b in &nontrivial {
            if l.norm_group(a).contains(b) != l.norm_group(b).contains(a) {
                reciprocity_holds = false;
                if a < b {
                    failures.push(format!("reciprocity fails for ({a}, {b})"));
                }
            }
        }
    }

    let mut all_index_2 = true;
    for &a in &nontrivial {
        let n = l.norm_group(a).len();
        if n != 4 {
            all_index_2 = false;
            failures.push(format!("N({a}) has {n} elements, not 4"));
        }
    }

    let mut injective = true;
    for (i, &a) in nontrivial.iter().enumerate() {
        for &b in &nontrivial[i + 1..] {
            if l.norm_group(a) == l.norm_group(b) {
                injective = false;
                failures.push(format!("N({a}) = N({b})"));
            }
        }
    }

    LatticeReport {
        scenario: l.scenario,
        all_subgroups,
        reciprocity_holds,
        all_index_2,
        injective,
        demushkin_consistent: all_index_2 && injective && reciprocity_holds,
        failures,
    }
}

/// Possible classes of `p + q` given `p ~ a`, `q ~ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumRuleResult {
    pub set: ClassSet,
    /// True when `b = -a`, where the sum can vanish.
    pub may_vanish: bool,
}

pub fn sum_rule(l: &NormLattice, a: SquareClass, b: SquareClass) -> SumRuleResult {
    let g = l.group();
    let bits = sum_rule_mask(l, a.bits(), b.bits());
    SumRuleResult { set: ClassSet::from_mask(g, bits), may_vanish: a.bits() ^ b.bits() == 1 }
}

/// Mask form of [`sum_rule`]: `a * N(-ab)`, or everything when `b = -a`.
pub(crate) fn sum_rule_mask(l: &NormLattice, a: u8, b: u8) -> u8 {
    let m = a ^ b ^ 1;
    if m == 0 {
        return 0xFF;
    }
    crate::squareclass::shift_mask(l.mask(m), a)
}

pub fn hilbert_from_lattice(l: &NormLattice, a: SquareClass, b: SquareClass) -> i8 {
    if a.is_identity() || b.is_identity() || l.norm_group(a).contains(b) {
        1
    } else {
        -1
    }
}

/// The full 8x8 Hilbert matrix in bit order.
pub fn hilbert_matrix(l: &NormLattice) -> [[i8; 8]; 8] {
    let g = l.group();
    let mut m = [[0i8; 8]; 8];
    for a in g.elements() {
        for b in g.elements() {
            m[a.bits() as usize][b.bits() as usize] = hilbert_from_lattice(l, a, b);
        }
    }
    m
}

impl Serialize for NormLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Groups<'a>(&'a NormLattice);
        impl Serialize for Groups<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let g = self.0.group();
                let mut map = serializer.serialize_map(Some(7))?;
                for a in g.elements().filter(|a| !a.is_identity()) {
                    map.serialize_entry(&a.label(), &self.0.norm_group(a))?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("scenario", &self.scenario)?;
        map.serialize_entry("groups", &Groups(self))?;
        map.end()
    }
}

/// Groups keyed by label, for display.
pub fn groups_by_label(l: &NormLattice) -> BTreeMap<String, ClassSet> {
    l.group()
        .elements()
        .filter(|a| !a.is_identity())
        .map(|a| (a.label(), l.norm_group(a)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: ClassGroup, labels: &[&str]) -> ClassSet {
        ClassSet::parse_labels(g, labels).unwrap()
    }

    #[test]
    fn stored_groups() {
        let a = lattice(LatticeScenario::CaseA);
        let ga = ClassGroup::CaseA;
        assert_eq!(a.norm_group(ga.parse("-5").unwrap()), set(ga, &["1", "-2", "5", "-10"]));
        assert_eq!(a.norm_group(ga.parse("1").unwrap()), ga.full_set());
        let gb = ClassGroup::CaseB;
        let k = lattice(LatticeScenario::CaseBSmall);
        assert_eq!(k.norm_group(gb.parse("-2").unwrap()), set(gb, &["1", "2"]));
        let big = lattice(LatticeScenario::CaseBLarge);
        assert_eq!(big.norm_group(gb.parse("-c").unwrap()), set(gb, &["1", "c", "-2", "-2c"]));
        assert_eq!(big.norm_group(gb.parse("-2").unwrap()), set(gb, &["1", "2", "-c", "-2c"]));
        assert_eq!(big.norm_group(gb.parse("-2c").unwrap()), set(gb, &["1", "2c", "-2", "-c"]));
    }

    #[test]
    fn lattice_reports() {
        let a = verify_lattice(&lattice(LatticeScenario::CaseA));
        assert!(a.demushkin_consistent && a.all_subgroups && a.failures.is_empty());
        let k = verify_lattice(&lattice(LatticeScenario::CaseBSmall));
        assert!(!k.all_index_2);
        assert!(!k.demushkin_consistent);
        assert!(k.all_subgroups);
        let big = verify_lattice(&lattice(LatticeScenario::CaseBLarge));
        assert!(big.demushkin_consistent);
    }

    #[test]
    fn sum_rule_examples() {
        let l = lattice(LatticeScenario::CaseA);
        let g = ClassGroup::CaseA;
        let c = |s| g.parse(s).unwrap();
        let r = sum_rule(&l, c("-5"), c("2"));
        assert_eq!(r.set, set(g, &["-5", "5", "-2", "2"]));
        let n_m1 = l.norm_group(c("-1"));
        assert_eq!(r.set.intersect(n_m1).unwrap(), set(g, &["2", "5"]));
        assert!(!r.may_vanish);
        assert_eq!(sum_rule(&l, c("1"), c("2")).set, set(g, &["1", "2", "-5", "-10"]));
        let v = sum_rule(&l, c("1"), c("-1"));
        assert!(v.may_vanish && v.set.is_full());
        assert_eq!(sum_rule(&l, c("2"), c("5")).set, set(g, &["2", "-1", "-10", "5"]));
    }

    #[test]
    fn sum_rule_is_symmetric() {
        for s in LatticeScenario::ALL {
            let l = lattice(s);
            for a in l.group().elements() {
                for b in l.group().elements() {
                    assert_eq!(sum_rule(&l, a, b), sum_rule(&l, b, a), "{s} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let l = lattice(LatticeScenario::CaseA);
        let c = |s| ClassGroup::CaseA.parse(s).unwrap();
        assert_eq!(hilbert_from_lattice(&l, c("-1"), c("-1")), -1);
        assert_eq!(hilbert_from_lattice(&l, c("5"), c("-1")), 1);
        assert_eq!(hilbert_from_lattice(&l, c("2"), c("-2")), 1);
        assert_eq!(hilbert_from_lattice(&l, c("2"), c("5")), -1);
    }

    #[test]
    fn hilbert_symmetric_and_bilinear() {
        for s in LatticeScenario::ALL {
            let l = lattice(s);
            let g = l.group();
            for a in g.elements() {
                for b in g.elements() {
                    assert_eq!(hilbert_from_lattice(&l, a, b), hilbert_from_lattice(&l, b, a));
                    if s == LatticeScenario::CaseBSmall {
                        continue;
                    }
                    for a2 in g.elements() {
                        assert_eq!(
                            hilbert_from_lattice(&l, a.times(a2), b),
                            hilbert_from_lattice(&l, a, b) * hilbert_from_lattice(&l, a2, b)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn every_single_toggle_breaks_verification() {
        let base = lattice(LatticeScenario::CaseA);
        let g = base.group();
        for a in g.elements().filter(|a| !a.is_identity()) {
            for b in g.elements() {
                let mut l = base.clone();
                if base.norm_group(a).contains(b) {
                    l.drop_entry(a, b);
                } else {
                    l.add_entry(a, b);
                }
                assert!(!verify_lattice(&l).demushkin_consistent || !verify_lattice(&l).all_subgroups);
            }
        }
    }

    #[test]
    fn serializes_groups() {
        let json = serde_json::to_value(lattice(LatticeScenario::CaseA)).unwrap();
        assert_eq!(json["scenario"], "case-a");
        assert_eq!(json["groups"]["-1"], serde_json::json!(["1", "2", "5", "10"]));
    }
}
