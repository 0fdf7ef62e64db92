//! Conjunction and spectrum-union of universal sentences.

use std::collections::BTreeSet;

use super::ast::{Formula, Signature, Term, UniversalSentence};
use super::LogicError;

/// The 0-ary relation choosing which disjunct of a union is active.
pub const UNION_SELECTOR: &str = "sel";

fn flatten_and(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(parts) => out.extend(parts.iter().cloned()),
        Formula::True => {}
        other => out.push(other.clone()),
    }
}

/// `forall (vars1 ∪ vars2) . θ1 & θ2`. Shared symbols must agree.
pub fn conjoin(a: &UniversalSentence, b: &UniversalSentence) -> Result<UniversalSentence, LogicError> {
    let sig = a.signature().merge(b.signature())?;
    let mut vars: Vec<String> = a.vars().to_vec();
    let taken: BTreeSet<String> = a.vars().iter().cloned().collect();
    let mut renames = Vec::new();
    for v in b.vars() {
        if taken.contains(v) {
            continue;
        }
        if sig.lookup(v).is_some() {
            let fresh = (0..)
                .map(|i| format!("{v}_{i}"))
                .find(|c| sig.lookup(c).is_none() && !taken.contains(c) && !b.vars().contains(c))
                .unwrap();
            renames.push((v.clone(), fresh.clone()));
            vars.push(fresh);
        } else {
            vars.push(v.clone());
        }
    }
    let b_matrix = if renames.is_empty() {
        b.matrix().clone()
    } else {
        b.matrix().rename(&|_| None, &|v| {
            renames.iter().find(|(old, _)| old == v).map(|(_, new)| new.clone())
        })
    };
    let mut parts = Vec::new();
    flatten_and(a.matrix(), &mut parts);
    flatten_and(&b_matrix, &mut parts);
    UniversalSentence::new(sig, vars, Formula::and_all(parts), None)
}

fn renamed_signature(sig: &Signature, suffix: &str, into: &mut Signature) -> Result<(), LogicError> {
    let collide = |e: LogicError| match e {
        LogicError::Duplicate(n) | LogicError::Reserved(n) => LogicError::Collision(n),
        other => other,
    };
    for f in sig.functions() {
        into.add_function(format!("{}{suffix}", f.name), f.arity).map_err(collide)?;
    }
    for r in sig.relations() {
        into.add_relation(format!("{}{suffix}", r.name), r.arity).map_err(collide)?;
    }
    for c in sig.constants() {
        into.add_constant(format!("{c}{suffix}")).map_err(collide)?;
    }
    Ok(())
}

/// Neutralize every function of `sig` (renamed with `suffix`) when `guard` holds:
/// `guard -> g(n1..nk) = n1`.
fn neutralize(sig: &Signature, suffix: &str, guard: &Formula, vars: &[String]) -> Vec<Formula> {
    sig.functions()
        .iter()
        .map(|g| {
            let args = vars[..g.arity].iter().map(|v| Term::Var(v.clone())).collect();
            Formula::implies(
                guard.clone(),
                Formula::Eq(Term::App(format!("{}{suffix}", g.name), args), Term::Var(vars[0].clone())),
            )
        })
        .collect()
}

/// A sentence whose models are (up to the selector and unused symbols) exactly
/// the models of `a` or of `b`.
///
/// Symbols of `a` get suffix `_1`, those of `b` suffix `_2`; variables get
/// `_l` and `_r`. Under `sel` the matrix of `a` must hold and the functions of
/// `b` are projections onto their first argument; under `!sel` symmetrically.
///
/// Size 0 is preserved only when the merged signature has no constants.
pub fn union_sentence(a: &UniversalSentence, b: &UniversalSentence) -> Result<UniversalSentence, LogicError> {
    let mut sig = Signature::new();
    renamed_signature(a.signature(), "_1", &mut sig)?;
    renamed_signature(b.signature(), "_2", &mut sig)?;
    sig.add_relation(UNION_SELECTOR, 0).map_err(|_| LogicError::Collision(UNION_SELECTOR.into()))?;

    let sym1 = |s: &str| Some(format!("{s}_1"));
    let sym2 = |s: &str| Some(format!("{s}_2"));
    let var_l = |v: &str| Some(format!("{v}_l"));
    let var_r = |v: &str| Some(format!("{v}_r"));
    let theta1 = a.matrix().rename(&sym1, &var_l);
    let theta2 = b.matrix().rename(&sym2, &var_r);

    let mut vars: Vec<String> = a.vars().iter().map(|v| format!("{v}_l")).collect();
    vars.extend(b.vars().iter().map(|v| format!("{v}_r")));
    let width = a.signature().max_function_arity().max(b.signature().max_function_arity());
    let neutral: Vec<String> = (1..=width).map(|i| format!("n{i}")).collect();
    for v in &neutral {
        if vars.contains(v) || sig.lookup(v).is_some() {
            return Err(LogicError::Collision(v.clone()));
        }
    }
    vars.extend(neutral.iter().cloned());

    let sel = Formula::Rel(UNION_SELECTOR.into(), vec![]);
    let not_sel = Formula::not(sel.clone());
    let mut parts = vec![
        Formula::implies(sel.clone(), theta1),
        Formula::implies(not_sel.clone(), theta2),
    ];
    parts.extend(neutralize(b.signature(), "_2", &sel, &neutral));
    parts.extend(neutralize(a.signature(), "_1", &not_sel, &neutral));

    let steps = match (a.declared_steps(), b.declared_steps()) {
        (Some(x), Some(y)) => Some(x.max(y) + 1),
        _ => None,
    };
    UniversalSentence::new(sig, vars, Formula::And(parts), steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_sentence, print_sentence};

    #[test]
    fn conjoin_merges_variables_by_name() {
        let a = parse_sentence("rel P/1\nforall x y . P(x) -> P(y)").unwrap();
        let b = parse_sentence("rel P/1\nforall y z . y < z | z <= y").unwrap();
        let c = conjoin(&a, &b).unwrap();
        assert_eq!(c.vars(), ["x", "y", "z"]);
        assert!(matches!(c.matrix(), Formula::And(parts) if parts.len() == 2));
    }

    #[test]
    fn conjoin_rejects_conflicts() {
        let a = parse_sentence("rel P/1\nforall x . P(x)").unwrap();
        let b = parse_sentence("fn P/1\nforall x . P(x) = x").unwrap();
        assert_eq!(conjoin(&a, &b).unwrap_err(), LogicError::Conflict("P".into()));
    }

    #[test]
    fn conjoin_renames_variable_shadowing_symbol() {
        let a = parse_sentence("const a\nforall x . x = a").unwrap();
        let b = parse_sentence("forall a . a = a").unwrap();
        let c = conjoin(&a, &b).unwrap();
        assert_eq!(c.vars(), ["x", "a_0"]);
    }

    #[test]
    fn union_is_well_formed_and_prints() {
        let a = parse_sentence("fn i/1\nconst a\nsteps 2\nforall x . i(x) = a").unwrap();
        let b = parse_sentence("fn g/2\nsteps 1\nforall x y . g(x,y) < y").unwrap();
        let u = union_sentence(&a, &b).unwrap();
        assert_eq!(u.declared_steps(), Some(3));
        assert_eq!(u.vars(), ["x_l", "x_r", "y_r", "n1", "n2"]);
        assert!(u.signature().lookup(UNION_SELECTOR).is_some());
        assert_eq!(parse_sentence(&print_sentence(&u)).unwrap(), u);
    }

    #[test]
    fn union_with_itself_keeps_sides_apart() {
        let a = parse_sentence("rel P/1\nforall x . P(x)").unwrap();
        let u = union_sentence(&a, &a).unwrap();
        assert_eq!(u.signature().relations().len(), 3);
    }
}
