//! Sampled 2-adic instances of a case, checked against every derived set.

use serde::Serialize;

use crate::derivation::{Expr, KnowledgeBase};
use crate::dyadic::{eval_expr, sample_hypothesis, square_class_of};
use crate::squareclass::ClassSet;

/// Violation messages kept per case.
const MAX_MESSAGES: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub requested: usize,
    pub samples: usize,
    pub seed: u64,
    pub precision: u32,
    /// Expressions whose derived sets were checked on every sample.
    pub checked: usize,
    /// Evaluations that cancelled below the working precision.
    pub skipped: usize,
    pub violations: usize,
    pub messages: Vec<String>,
}

impl CrossCheck {
    pub fn ok(&self) -> bool {
        self.violations == 0 && self.samples >= self.requested
    }
}

/// Draws instances of the case hypotheses and checks that each realized
/// class lies in the set derived at the root and in each target's set.
pub fn cross_check(
    start: &KnowledgeBase,
    derived: &[(Expr, ClassSet)],
    samples: usize,
    seed: u64,
    k: u32,
) -> CrossCheck {
    let hyp: Vec<(Expr, ClassSet)> = start.facts().map(|(e, s)| (e.clone(), s)).collect();
    let drawn = sample_hypothesis(&hyp, samples, seed, k);
    let mut out = CrossCheck {
        requested: samples,
        samples: drawn.found,
        seed,
        precision: k,
        checked: derived.len(),
        ..Default::default()
    };
    for at in &drawn.tuples {
        for (e, set) in derived {
            let c = match eval_expr(e, at, k).and_then(|v| square_class_of(&v)) {
                Ok(c) => c,
                Err(_) => {
                    out.skipped += 1;
                    continue;
                }
            };
            if !set.contains(c) {
                out.violations += 1;
                if out.messages.len() < MAX_MESSAGES {
                    let point: Vec<String> = at.iter().map(|(a, v)| format!("{a} = {v}")).collect();
                    out.messages.push(format!("{e} ~ {} outside {set} at {}", c.label(), point.join(", ")));
                }
            }
        }
    }
    out
}
