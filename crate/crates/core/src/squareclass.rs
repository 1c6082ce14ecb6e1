//! The square-class group `K^x / (K^x)^2` as a 3-dimensional F2-vector space.
//!
//! Elements are exponent vectors over a fixed, named basis. Bit 0 is the
//! exponent of `-1`, bit 1 the exponent of `2`, bit 2 the exponent of the
//! third generator (`5` in the 2-adic scenario, the abstract `c` otherwise).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ClassError;

/// Which basis the group carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassGroup {
    /// Basis `(-1, 2, 5)`.
    #[serde(rename = "case-a")]
    CaseA,
    /// Basis `(-1, 2, c)`.
    #[serde(rename = "case-b")]
    CaseB,
}

impl ClassGroup {
    pub const ORDER: usize = 8;

    pub fn basis_labels(self) -> [&'static str; 3] {
        match self {
            ClassGroup::CaseA => ["-1", "2", "5"],
            ClassGroup::CaseB => ["-1", "2", "c"],
        }
    }

    /// All eight classes in bit order.
    pub fn elements(self) -> impl Iterator<Item = SquareClass> {
        (0u8..8).map(move |bits| SquareClass { group: self, bits })
    }

    pub fn identity(self) -> SquareClass {
        SquareClass { group: self, bits: 0 }
    }

    pub fn minus_one(self) -> SquareClass {
        SquareClass { group: self, bits: 0b001 }
    }

    pub fn two(self) -> SquareClass {
        SquareClass { group: self, bits: 0b010 }
    }

    /// The third generator: `5` or `c`.
    pub fn third(self) -> SquareClass {
        SquareClass { group: self, bits: 0b100 }
    }

    pub fn class(self, bits: u8) -> SquareClass {
        SquareClass { group: self, bits: bits & 7 }
    }

    pub fn parse(self, label: &str) -> Result<SquareClass, ClassError> {
        parse_class(label, self)
    }

    pub fn empty_set(self) -> ClassSet {
        ClassSet { group: self, mask: 0 }
    }

    pub fn full_set(self) -> ClassSet {
        ClassSet { group: self, mask: 0xFF }
    }

    fn magnitude_labels(self) -> [&'static str; 4] {
        match self {
            ClassGroup::CaseA => ["1", "2", "5", "10"],
            ClassGroup::CaseB => ["1", "2", "c", "2c"],
        }
    }
}

impl fmt::Display for ClassGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.basis_labels();
        write!(f, "<{a},{b},{c}>")
    }
}

/// One element of the square-class group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    group: ClassGroup,
    bits: u8,
}

impl SquareClass {
    pub fn group(self) -> ClassGroup {
        self.group
    }

    /// Exponent vector; bit `i` is the exponent of basis element `i`.
    pub fn bits(self) -> u8 {
        self.bits
    }

    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    pub fn negate(self) -> SquareClass {
        SquareClass { group: self.group, bits: self.bits ^ 1 }
    }

    /// Group law; fails only when the operands live in different groups.
    pub fn mul(self, other: SquareClass) -> Result<SquareClass, ClassError> {
        class_mul(self, other)
    }

    /// Group law for callers that already know both operands share a group.
    ///
    /// Panics on mixed groups.
    pub fn times(self, other: SquareClass) -> SquareClass {
        assert_eq!(self.group, other.group, "square classes from different groups");
        SquareClass { group: self.group, bits: self.bits ^ other.bits }
    }

    pub fn label(self) -> String {
        format_class(self)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_class(*self))
    }
}

pub fn class_mul(a: SquareClass, b: SquareClass) -> Result<SquareClass, ClassError> {
    if a.group != b.group {
        return Err(ClassError::MixedGroups);
    }
    Ok(SquareClass { group: a.group, bits: a.bits ^ b.bits })
}

/// Canonical label: optional `-`, then one of `1, 2, 5, 10` (or `1, 2, c, 2c`).
pub fn format_class(c: SquareClass) -> String {
    let mag = c.group.magnitude_labels()[(c.bits >> 1) as usize];
    if c.bits & 1 == 1 {
        format!("-{mag}")
    } else {
        mag.to_string()
    }
}

/// Parses a signed product of basis generators such as `-10`, `2c`, `1`.
///
/// Besides the canonical labels this accepts `+`, the unicode minus sign and
/// explicit products like `-2*5` or `2*c`.
pub fn parse_class(label: &str, group: ClassGroup) -> Result<SquareClass, ClassError> {
    let unknown = || ClassError::UnknownLabel(label.to_string());
    let mut s = label.trim().replace('\u{2212}', "-");
    s.retain(|ch| !ch.is_whitespace());
    let mut bits = 0u8;
    let mut rest = s.as_str();
    loop {
        if let Some(r) = rest.strip_prefix('-') {
            bits ^= 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else {
            break;
        }
    }
    if rest.is_empty() {
        return Err(unknown());
    }
    for factor in rest.split('*') {
        let f = match (group, factor) {
            (_, "1") => 0,
            (_, "-1") => 1,
            (_, "2") => 0b010,
            (ClassGroup::CaseA, "5") => 0b100,
            (ClassGroup::CaseA, "10") => 0b110,
            (ClassGroup::CaseB, "c") => 0b100,
            (ClassGroup::CaseB, "2c") | (ClassGroup::CaseB, "c2") => 0b110,
            _ => return Err(unknown()),
        };
        bits ^= f;
    }
    Ok(SquareClass { group, bits })
}

/// A subset of the eight classes of one group, as an 8-bit mask.
///
/// Bit `i` of the mask is set iff the class with exponent vector `i` is a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassSet {
    group: ClassGroup,
    mask: u8,
}

impl ClassSet {
    pub fn from_mask(group: ClassGroup, mask: u8) -> Self {
        ClassSet { group, mask }
    }

    pub fn from_classes(group: ClassGroup, classes: impl IntoIterator<Item = SquareClass>) -> Self {
        let mut mask = 0u8;
        for c in classes {
            assert_eq!(c.group, group, "square classes from different groups");
            mask |= 1 << c.bits;
        }
        ClassSet { group, mask }
    }

    pub fn singleton(c: SquareClass) -> Self {
        ClassSet { group: c.group, mask: 1 << c.bits }
    }

    /// Parses a list of labels, e.g. `["1", "-5"]`.
    pub fn parse_labels<S: AsRef<str>>(group: ClassGroup, labels: &[S]) -> Result<Self, ClassError> {
        let mut mask = 0u8;
        for l in labels {
            mask |= 1 << parse_class(l.as_ref(), group)?.bits;
        }
        Ok(ClassSet { group, mask })
    }

    /// Parses `{1,-5}`, `1,-5` or `1 -5`.
    pub fn parse(group: ClassGroup, text: &str) -> Result<Self, ClassError> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let labels: Vec<&str> = inner
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        Self::parse_labels(group, &labels)
    }

    pub fn group(self) -> ClassGroup {
        self.group
    }

    pub fn mask(self) -> u8 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn is_full(self) -> bool {
        self.mask == 0xFF
    }

    pub fn contains(self, c: SquareClass) -> bool {
        c.group == self.group && self.mask & (1 << c.bits) != 0
    }

    pub fn is_subset(self, other: ClassSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn iter(self) -> impl Iterator<Item = SquareClass> {
        let group = self.group;
        let mask = self.mask;
        (0u8..8).filter(move |b| mask & (1 << b) != 0).map(move |bits| SquareClass { group, bits })
    }

    /// The single member, if there is exactly one.
    pub fn only(self) -> Option<SquareClass> {
        (self.len() == 1).then(|| SquareClass { group: self.group, bits: self.mask.trailing_zeros() as u8 })
    }

    pub fn insert(&mut self, c: SquareClass) {
        assert_eq!(c.group, self.group, "square classes from different groups");
        self.mask |= 1 << c.bits;
    }

    pub fn intersect(self, other: ClassSet) -> Result<ClassSet, ClassError> {
        if self.group != other.group {
            return Err(ClassError::MixedGroups);
        }
        Ok(ClassSet { group: self.group, mask: self.mask & other.mask })
    }

    pub fn union(self, other: ClassSet) -> Result<ClassSet, ClassError> {
        if self.group != other.group {
            return Err(ClassError::MixedGroups);
        }
        Ok(ClassSet { group: self.group, mask: self.mask | other.mask })
    }

    pub fn complement(self) -> ClassSet {
        ClassSet { group: self.group, mask: !self.mask }
    }

    /// `{a * s : s in self}`; panics on mixed groups.
    pub fn shift(self, a: SquareClass) -> ClassSet {
        assert_eq!(a.group, self.group, "square classes from different groups");
        ClassSet { group: self.group, mask: shift_mask(self.mask, a.bits) }
    }

    /// Elementwise product `{s * t}` of two sets.
    pub fn product(self, other: ClassSet) -> Result<ClassSet, ClassError> {
        if self.group != other.group {
            return Err(ClassError::MixedGroups);
        }
        let mut mask = 0u8;
        for s in self.iter() {
            mask |= shift_mask(other.mask, s.bits);
        }
        Ok(ClassSet { group: self.group, mask })
    }

    /// Sorted canonical labels, the serialized form.
    pub fn labels(self) -> Vec<String> {
        let mut v: Vec<SquareClass> = self.iter().collect();
        v.sort_by_key(|c| label_rank(*c));
        v.into_iter().map(format_class).collect()
    }

    /// Whether the set is closed under the group law and contains the identity.
    pub fn is_subgroup(self) -> bool {
        if self.mask & 1 == 0 {
            return false;
        }
        self.iter().all(|a| self.iter().all(|b| self.contains(a.times(b))))
    }
}

/// Translates a mask by the class with exponent vector `bits`.
pub(crate) fn shift_mask(mask: u8, bits: u8) -> u8 {
    let mut out = 0u8;
    for i in 0u8..8 {
        if mask & (1 << i) != 0 {
            out |= 1 << (i ^ bits);
        }
    }
    out
}

// Label order for display: 1,-1,2,-2,5,-5,10,-10.
fn label_rank(c: SquareClass) -> (u8, u8) {
    (c.bits >> 1, c.bits & 1)
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

pub fn set_intersect(sets: &[ClassSet]) -> Result<ClassSet, ClassError> {
    let Some(first) = sets.first() else {
        return Err(ClassError::EmptyIntersection);
    };
    sets[1..].iter().try_fold(*first, |acc, s| acc.intersect(*s))
}

pub fn coset(a: SquareClass, s: ClassSet) -> Result<ClassSet, ClassError> {
    if a.group != s.group {
        return Err(ClassError::MixedGroups);
    }
    Ok(s.shift(a))
}

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_class(*self))
    }
}

impl Serialize for ClassSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

/// Labels parse without group context only when unambiguous: anything
/// mentioning `c` is a Case B label, everything else is read as Case A.
impl FromStr for SquareClass {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('c') {
            parse_class(s, ClassGroup::CaseB)
        } else {
            parse_class(s, ClassGroup::CaseA)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(label: &str) -> SquareClass {
        parse_class(label, ClassGroup::CaseA).unwrap()
    }

    fn set_a(labels: &[&str]) -> ClassSet {
        ClassSet::parse_labels(ClassGroup::CaseA, labels).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(class_mul(a("-2"), a("-5")).unwrap(), a("10"));
        assert_eq!(class_mul(a("2"), a("2")).unwrap(), a("1"));
        assert_eq!(class_mul(a("-1"), a("10")).unwrap(), a("-10"));
    }

    #[test]
    fn mixed_groups_rejected() {
        let b = parse_class("c", ClassGroup::CaseB).unwrap();
        assert_eq!(class_mul(a("5"), b), Err(ClassError::MixedGroups));
        let s = ClassSet::singleton(b);
        assert_eq!(set_a(&["1"]).intersect(s), Err(ClassError::MixedGroups));
        assert_eq!(coset(a("2"), s), Err(ClassError::MixedGroups));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(a("-10").bits(), 0b111);
        assert_eq!(a("1").bits(), 0);
        assert_eq!(parse_class("2c", ClassGroup::CaseB).unwrap().bits(), 0b110);
        assert_eq!(a("\u{2212}5"), a("-5"));
        assert_eq!(a("-2*5"), a("-10"));
        assert!(matches!(parse_class("3", ClassGroup::CaseA), Err(ClassError::UnknownLabel(_))));
        assert!(parse_class("c", ClassGroup::CaseA).is_err());
        assert!(parse_class("5", ClassGroup::CaseB).is_err());
        assert!(parse_class("", ClassGroup::CaseB).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for g in [ClassGroup::CaseA, ClassGroup::CaseB] {
            let id = g.identity();
            for x in g.elements() {
                assert_eq!(x.times(id), x);
                assert!(x.times(x).is_identity());
                for y in g.elements() {
                    assert_eq!(x.times(y), y.times(x));
                    for z in g.elements() {
                        assert_eq!(x.times(y).times(z), x.times(y.times(z)));
                    }
                }
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        for g in [ClassGroup::CaseA, ClassGroup::CaseB] {
            let labels: Vec<String> = g.elements().map(format_class).collect();
            for c in g.elements() {
                assert_eq!(parse_class(&format_class(c), g).unwrap(), c);
            }
            let mut dedup = labels.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), 8);
        }
        let b: Vec<String> = ClassGroup::CaseB.elements().map(format_class).collect();
        assert_eq!(b, ["1", "-1", "2", "-2", "c", "-c", "2c", "-2c"]);
    }

    #[test]
    fn intersect_and_coset_examples() {
        // N(-2) and N(-10) from the Case A lattice.
        let n_m2 = set_a(&["1", "2", "-5", "-10"]);
        let n_m10 = set_a(&["1", "-2", "-5", "10"]);
        let n_m1 = set_a(&["1", "2", "5", "10"]);
        assert_eq!(set_intersect(&[n_m2, n_m10]).unwrap(), set_a(&["1", "-5"]));
        assert_eq!(set_intersect(&[n_m1, n_m2]).unwrap(), set_a(&["1", "2"]));
        let n_10 = set_a(&["1", "-1", "10", "-10"]);
        assert_eq!(coset(a("-5"), n_10).unwrap(), set_a(&["-5", "5", "-2", "2"]));
        assert_eq!(coset(a("1"), n_m2).unwrap(), n_m2);
        assert_eq!(coset(a("2"), set_a(&["1", "2"])).unwrap(), set_a(&["1", "2"]));
    }

    #[test]
    fn set_laws_over_all_subsets() {
        let g = ClassGroup::CaseA;
        for m in 0..=255u8 {
            let s = ClassSet::from_mask(g, m);
            assert_eq!(s.intersect(s).unwrap(), s);
            assert_eq!(s.intersect(g.full_set()).unwrap(), s);
            assert_eq!(s.intersect(g.empty_set()).unwrap(), g.empty_set());
            for c in g.elements() {
                let t = coset(c, s).unwrap();
                assert_eq!(t.len(), s.len());
                assert_eq!(coset(c, t).unwrap(), s);
            }
        }
    }

    #[test]
    fn serializes_sorted_labels() {
        let s = set_a(&["-10", "1", "2", "-5"]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["1","2","-5","-10"]"#);
        assert_eq!(ClassSet::parse(ClassGroup::CaseA, "{1, -5}").unwrap(), set_a(&["1", "-5"]));
    }

    #[test]
    fn subgroup_check() {
        assert!(set_a(&["1", "2", "-5", "-10"]).is_subgroup());
        assert!(!set_a(&["1", "2", "-5"]).is_subgroup());
        assert!(!set_a(&["2", "-5", "-10"]).is_subgroup());
    }
}
