use std::fmt;

use super::constants::scalar_class;
use super::expr::Expr;
use super::scalar::Scalar;
use crate::error::DerivationError;
use crate::normlattice::NormLattice;
use crate::scenario::Scenario;
use crate::squareclass::{ClassGroup, ClassSet, SquareClass};

/// Candidate square classes for a set of expressions, under one scenario.
///
/// Every stored set is nonempty; an assumption that empties a set is
/// reported as a contradiction instead of being stored.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    scenario: Scenario,
    lattice: NormLattice,
    entries: Vec<(Expr, u8)>,
}

impl KnowledgeBase {
    pub fn new(scenario: Scenario) -> Self {
        KnowledgeBase::with_lattice(scenario, scenario.lattice())
    }

    /// Uses a caller-supplied lattice, e.g. a deliberately corrupted one.
    pub fn with_lattice(scenario: Scenario, lattice: NormLattice) -> Self {
        assert_eq!(lattice.group(), scenario.group(), "lattice does not match the scenario");
        KnowledgeBase { scenario, lattice, entries: Vec::new() }
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn group(&self) -> ClassGroup {
        self.scenario.group()
    }

    pub fn lattice(&self) -> &NormLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn position(&self, e: &Expr) -> Result<usize, usize> {
        self.entries.binary_search_by(|(k, _)| k.cmp(e))
    }

    /// Intersects the stored set of `e` with `set`, adding `e` if new.
    pub fn assume(&mut self, e: Expr, set: ClassSet) -> Result<(), DerivationError> {
        assert_eq!(set.group(), self.group(), "class set from a different group");
        if e.is_zero() {
            return Err(DerivationError::ContradictionFound(e.to_string()));
        }
        match self.position(&e) {
            Ok(i) => {
                let m = self.entries[i].1 & set.mask();
                if m == 0 {
                    return Err(DerivationError::ContradictionFound(e.to_string()));
                }
                self.entries[i].1 = m;
            }
            Err(i) => {
                if set.is_empty() {
                    return Err(DerivationError::ContradictionFound(e.to_string()));
                }
                self.entries.insert(i, (e, set.mask()));
            }
        }
        Ok(())
    }

    pub fn assume_class(&mut self, e: Expr, c: SquareClass) -> Result<(), DerivationError> {
        self.assume(e, ClassSet::singleton(c))
    }

    /// Parses both sides: `assume_str("1+x", "{1,-5}")`.
    pub fn assume_str(&mut self, e: &str, set: &str) -> Result<(), DerivationError> {
        let set = ClassSet::parse(self.group(), set)?;
        self.assume(Expr::parse(e)?, set)
    }

    /// Registers `e` with no information (the full group) if absent.
    pub fn track(&mut self, e: Expr) {
        if e.is_zero() || e.as_constant().is_some() {
            return;
        }
        if let Err(i) = self.position(&e) {
            self.entries.insert(i, (e, 0xFF));
        }
    }

    pub fn set_of(&self, e: &Expr) -> Option<ClassSet> {
        self.position(e).ok().map(|i| ClassSet::from_mask(self.group(), self.entries[i].1))
    }

    pub fn facts(&self) -> impl Iterator<Item = (&Expr, ClassSet)> {
        let g = self.group();
        self.entries.iter().map(move |(e, m)| (e, ClassSet::from_mask(g, *m)))
    }

    pub fn scalar_class(&self, s: &Scalar) -> Result<Option<SquareClass>, DerivationError> {
        scalar_class(self.scenario, s)
    }

    pub(crate) fn entries(&self) -> &[(Expr, u8)] {
        &self.entries
    }

    pub(crate) fn set_masks(&mut self, masks: &[u8]) {
        for ((_, m), new) in self.entries.iter_mut().zip(masks) {
            *m = *new;
        }
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, s) in self.facts() {
            writeln!(f, "{e} in {s}")?;
        }
        Ok(())
    }
}
