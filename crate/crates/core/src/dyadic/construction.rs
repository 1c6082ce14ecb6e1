//! The rigid-element construction evaluated in `Q_2`, where the subgroup `T`
//! is the set of elements of even valuation.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Dyadic;
use crate::error::DyadicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConstructionKind {
    #[serde(rename = "O1")]
    O1,
    #[serde(rename = "O2-unit")]
    O2Unit,
    #[serde(rename = "O2-nonunit")]
    O2NonUnit,
    #[serde(rename = "M-only")]
    MOnly,
    #[serde(rename = "outside")]
    Outside,
}

impl ConstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::O1 => "O1",
            ConstructionKind::O2Unit => "O2-unit",
            ConstructionKind::O2NonUnit => "O2-nonunit",
            ConstructionKind::MOnly => "M-only",
            ConstructionKind::Outside => "outside",
        }
    }
}

/// Elements of `O1` used to test membership in its stabilizer `O2`.
const WITNESS_UNITS: [i64; 4] = [1, 3, 5, 7];

struct Probe {
    one: Dyadic,
    witnesses: Vec<Dyadic>,
}

impl Probe {
    fn new(k: u32) -> Result<Probe, DyadicError> {
        let witnesses = WITNESS_UNITS
            .iter()
            .map(|&u| Dyadic::from_int(2 * u, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Probe { one: Dyadic::from_int(1, k)?, witnesses })
    }

    fn in_t(&self, x: &Dyadic) -> bool {
        x.valuation().is_some_and(|v| v.rem_euclid(2) == 0)
    }

    /// `x` is outside `T` and `1 + x` is inside.
    fn o1(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        if x.is_zero() || self.in_t(x) {
            return Ok(false);
        }
        Ok(self.in_t(&self.one.add(x)?))
    }

    /// `x * w` stays in `O1` for every witness `w`.
    fn o2(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        if x.is_zero() {
            return Ok(false);
        }
        for w in &self.witnesses {
            if !self.o1(&x.mul(w))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn in_o(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.o1(x)? || self.o2(x)?)
    }

    fn is_unit(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        Ok(!x.is_zero() && self.in_o(x)? && self.in_o(&x.inv()?)?)
    }

    /// Non-units of `O`.
    fn in_m(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.in_o(x)? && !self.in_o(&x.inv()?)?)
    }

    /// `O1 ∪ 2*O1`.
    fn in_m_closed(&self, x: &Dyadic) -> Result<bool, DyadicError> {
        Ok(self.o1(x)? || self.o1(&x.shl(-1))?)
    }

    fn classify(&self, x: &Dyadic) -> Result<ConstructionKind, DyadicError> {
        if x.is_zero() {
            return Err(DyadicError::Zero);
        }
        if self.o1(x)? {
            return Ok(ConstructionKind::O1);
        }
        if self.o2(x)? {
            return Ok(if self.in_o(&x.inv()?)? { ConstructionKind::O2Unit } else { ConstructionKind::O2NonUnit });
        }
        if self.in_m_closed(x)? {
            return Ok(ConstructionKind::MOnly);
        }
        Ok(ConstructionKind::Outside)
    }
}

/// Membership from the defining predicates of `O1`, `O2` and `M`.
pub fn classify_in_construction(x: &Dyadic) -> Result<ConstructionKind, DyadicError> {
    Probe::new(x.precision())?.classify(x)
}

/// The same classification read off the valuation.
pub fn closed_form_kind(x: &Dyadic) -> Result<ConstructionKind, DyadicError> {
    let v = x.valuation().ok_or(DyadicError::Zero)?;
    Ok(match v {
        0 => ConstructionKind::O2Unit,
        v if v > 0 && v % 2 == 1 => ConstructionKind::O1,
        v if v > 0 => ConstructionKind::O2NonUnit,
        _ => ConstructionKind::Outside,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstructionReport {
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    /// Checks abandoned because a sum cancelled below the working precision.
    pub skipped: usize,
    pub counts: BTreeMap<String, usize>,
    /// Number of classes of the sampled value group modulo twice itself.
    pub value_group_index: usize,
    pub violations: Vec<String>,
}

impl ConstructionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples elements with valuation in `[-8, 8]` and checks the ring,
/// ideal, residue field and value group properties on singles and
/// consecutive pairs.
pub fn verify_construction(samples: usize, seed: u64, k: u32) -> ConstructionReport {
    let mut report = ConstructionReport { samples, seed, precision: k, ..Default::default() };
    if samples == 0 {
        return report;
    }
    let probe = match Probe::new(k) {
        Ok(p) => p,
        Err(e) => {
            report.violations.push(format!("precision {k}: {e}"));
            return report;
        }
    };
    for w in &probe.witnesses {
        if !matches!(probe.o1(w), Ok(true)) {
            report.violations.push(format!("witness {w} is not in O1"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Dyadic> = (0..samples).map(|_| Dyadic::random(&mut rng, -8, 8, k)).collect();
    let mut parities = [false; 2];
    for (i, x) in xs.iter().enumerate() {
        let y = &xs[(i + 1) % xs.len()];
        match check_single(&probe, x, &mut report).and_then(|_| check_pair(&probe, x, y, &mut report)) {
            Ok(()) => {}
            Err(DyadicError::PrecisionExhausted) => report.skipped += 1,
            Err(e) => report.violations.push(format!("{x}: {e}")),
        }
        parities[usize::from(!probe.in_t(x))] = true;
    }
    report.value_group_index = parities.iter().filter(|&&p| p).count();
    if samples >= 2 && report.value_group_index != 2 {
        report.violations.push(format!("value group modulo 2 has {} sampled classes", report.value_group_index));
    }
    report
}

fn check_single(p: &Probe, x: &Dyadic, report: &mut ConstructionReport) -> Result<(), DyadicError> {
    let mut fails: Vec<String> = Vec::new();
    let kind = p.classify(x)?;
    let closed = closed_form_kind(x)?;
    if kind != closed {
        fails.push(format!("predicates give {} but the valuation gives {}", kind.name(), closed.name()));
    }
    let unit = p.is_unit(x)?;
    if unit && !p.o2(x)? {
        fails.push("unit of O outside O2".into());
    }
    if p.o2(x)? && !p.in_t(x) {
        fails.push("O2 element outside T".into());
    }
    let in_m = p.in_m(x)?;
    if in_m != p.in_m_closed(x)? {
        fails.push("maximal ideal differs from O1 ∪ 2*O1".into());
    }
    if in_m && !p.in_o(&x.shl(-1))? {
        fails.push("element of M with valuation below v(2)".into());
    }
    if unit && !p.in_m(&p.one.add(x)?)? {
        fails.push("unit x with 1 + x a unit: residue field larger than 2".into());
    }
    *report.counts.entry(kind.name().to_string()).or_insert(0) += 1;
    report.violations.extend(fails.into_iter().map(|m| format!("{x}: {m}")));
    Ok(())
}

fn check_pair(p: &Probe, x: &Dyadic, y: &Dyadic, report: &mut ConstructionReport) -> Result<(), DyadicError> {
    let mut fails: Vec<&str> = Vec::new();
    let (ox, oy) = (p.in_o(x)?, p.in_o(y)?);
    if ox && oy {
        if !p.in_o(&x.mul(y))? {
            fails.push("O not closed under products");
        }
        if !p.in_o(&x.add(y)?)? {
            fails.push("O not closed under sums");
        }
    }
    let (mx, my) = (p.in_m(x)?, p.in_m(y)?);
    if mx && oy && !p.in_m(&x.mul(y))? {
        fails.push("M * O not inside M");
    }
    if mx && my && !p.in_m(&x.add(y)?)? {
        fails.push("M not closed under sums");
    }
    if !p.in_t(x) && !p.in_t(y) && !p.in_t(&x.div(y)?) {
        fails.push("more than two classes modulo T");
    }
    report.violations.extend(fails.into_iter().map(|m| format!("({x}, {y}): {m}")));
    Ok(())
}
