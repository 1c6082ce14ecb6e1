use super::expr::{Atom, Expr};
use super::kb::KnowledgeBase;
use super::scalar::Scalar;
use crate::error::DerivationError;
use crate::scenario::Scenario;

/// The substitution scalars `a` for which `var -> -a*var/(1 + a*var)` is used.
pub fn substitution_scalars(scenario: Scenario) -> Vec<Scalar> {
    let base: [(i64, i64); 3] = match scenario {
        Scenario::CaseA => [(1, 1), (5, 1), (1, 5)],
        _ => [(1, 1), (2, 1), (1, 2)],
    };
    base.iter().flat_map(|&(n, d)| [Scalar::from_ratio(n, d), Scalar::from_ratio(-n, d)]).collect()
}

/// Introduces `var' = -a*var/(1 + a*var)` with its class and that of `1 + var'`.
///
/// `1 + var' = 1/(1 + a*var)`, so `1 + var' ~ 1 + a*var`, and
/// `var' ~ -a * var * (1 + a*var)`; set-valued facts combine pointwise.
pub fn substitute_transform(kb: &KnowledgeBase, a: &Scalar, var: Atom) -> Result<KnowledgeBase, DerivationError> {
    if !substitution_scalars(kb.scenario()).contains(a) {
        return Err(DerivationError::BadSubstitution(a.to_string()));
    }
    let v = Expr::atom(var);
    let w = Expr::one_plus(a.clone(), &v);
    let sv = kb.set_of(&v).ok_or_else(|| DerivationError::MissingFact(v.to_string()))?;
    let sw = kb.set_of(&w).ok_or_else(|| DerivationError::MissingFact(w.to_string()))?;
    let minus_a = kb
        .scalar_class(&-a)?
        .ok_or_else(|| DerivationError::BadSubstitution(a.to_string()))?;
    let fresh = fresh_atom(kb, var);
    let set = sv.product(sw)?.shift(minus_a);
    let mut out = kb.clone();
    let fv = Expr::atom(fresh);
    out.assume(Expr::one_plus(Scalar::one(), &fv), sw)?;
    out.assume(fv, set)?;
    Ok(out)
}

fn fresh_atom(kb: &KnowledgeBase, var: Atom) -> Atom {
    let used: Vec<Atom> = kb.facts().flat_map(|(e, _)| e.atoms()).collect();
    let mut a = var.primed();
    while used.contains(&a) {
        a = a.primed();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squareclass::{ClassGroup, ClassSet};

    fn kb(sc: Scenario, facts: &[(&str, &str)]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new(sc);
        for (e, s) in facts {
            kb.assume_str(e, s).unwrap();
        }
        kb
    }

    fn label(kb: &KnowledgeBase, e: &str) -> Vec<String> {
        kb.set_of(&Expr::parse(e).unwrap()).unwrap().labels()
    }

    #[test]
    fn examples() {
        let y = Atom::new('y');
        let k = kb(Scenario::CaseA, &[("y", "-2"), ("1+y", "1")]);
        let out = substitute_transform(&k, &Scalar::one(), y).unwrap();
        assert_eq!(label(&out, "y'"), ["2"]);
        assert_eq!(label(&out, "1+y'"), ["1"]);

        let x = Atom::new('x');
        let k = kb(Scenario::CaseA, &[("x", "2"), ("1+x", "1")]);
        let out = substitute_transform(&k, &Scalar::one(), x).unwrap();
        assert_eq!(label(&out, "x'"), ["-2"]);
        assert_eq!(label(&out, "1+x'"), ["1"]);

        let k = kb(Scenario::CaseA, &[("y", "2"), ("1-y", "1")]);
        let out = substitute_transform(&k, &Scalar::from_int(-1), y).unwrap();
        assert_eq!(label(&out, "y'"), ["2"]);
        assert_eq!(label(&out, "1+y'"), ["1"]);
    }

    #[test]
    fn set_valued_and_errors() {
        let y = Atom::new('y');
        let k = kb(Scenario::CaseA, &[("y", "2"), ("1+5y", "{1,-5}")]);
        let out = substitute_transform(&k, &Scalar::from_int(5), y).unwrap();
        let want = ClassSet::parse(ClassGroup::CaseA, "{-10,2}").unwrap().labels();
        assert_eq!(label(&out, "y'"), want);

        let k = kb(Scenario::CaseA, &[("y", "2")]);
        assert!(matches!(
            substitute_transform(&k, &Scalar::one(), y),
            Err(DerivationError::MissingFact(_))
        ));
        assert!(matches!(
            substitute_transform(&k, &Scalar::from_int(3), y),
            Err(DerivationError::BadSubstitution(_))
        ));
        let k = kb(Scenario::CaseB3Is1, &[("y", "c"), ("1+2y", "1")]);
        let out = substitute_transform(&k, &Scalar::from_int(2), y).unwrap();
        assert_eq!(label(&out, "y'"), ["-2c"]);
    }
}
