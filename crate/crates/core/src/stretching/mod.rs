//! Indiscernible generators of finite models and finite prefixes of the
//! models obtained by stretching them along an ordinal.
//!
//! The flavor flags (monotonic, special, remarkable) are operational
//! readings checked on terms with at most `n + 1` applications; see
//! [`classify`]. Semi-monotonicity has no decision procedure and is always
//! reported as unknown.

mod classify;
mod prefix;
mod terms;

pub use classify::{classify, find_indiscernibles, generates, order_indiscernible, Flags, IndiscernibleWitness, Undetermined};
pub use prefix::{stretch_prefix, PrefixReport, StretchPrefix, Stretcher};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::logic::{compute_n, term_metrics, UniversalSentence};
use crate::ordinals::Ordinal;
use crate::structures::{find_violation, FiniteStructure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StretchError {
    #[error("an index pattern of length {needed} exceeds the {available} available generators")]
    Capacity { needed: usize, available: usize },
    #[error("prefix is not closed under `{function}`; the term bound is too small")]
    NotClosed { function: String },
    #[error("incoherent prefix: {0}")]
    Incoherent(String),
    #[error("`{function}` needs {combinations} argument combinations per level")]
    TooManyTerms { function: String, combinations: usize },
    #[error("{0}")]
    BadGenerators(String),
    #[error("pattern budget {budget} exceeds the {available} generators")]
    BudgetTooLarge { budget: usize, available: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StretchVerdict {
    /// Every checked prefix satisfies the sentence.
    VerifiedToBudget,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingPrefix {
    pub prefix: PrefixReport,
    /// Offending assignment, variable to element label.
    pub assignment: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchReport {
    pub verdict: StretchVerdict,
    pub generators: Vec<usize>,
    pub n_phi: usize,
    pub order_indiscernible: bool,
    /// Largest index set size checked; one representative per size.
    pub pattern_budget: usize,
    /// `min(N, q * max(v, 1) + v)`: shapes a violation can involve.
    pub sufficiency_budget: usize,
    /// The indiscernible count `max{3v, v' + v, q v'}`.
    pub indiscernible_count: usize,
    pub exhaustive: bool,
    pub failing_prefix: Option<FailingPrefix>,
    pub flavor_definitions: &'static str,
}

/// Check `phi` on the prefixes over `{0, .., s-1}` for every `s <= budget`.
/// Finite index sets of equal size have the same order type, so this covers
/// every index pattern up to the budget.
pub fn verify_stretch(
    phi: &UniversalSentence,
    m: &FiniteStructure,
    gens: &[usize],
    budget: usize,
) -> Result<StretchReport, StretchError> {
    if budget > gens.len() {
        return Err(StretchError::BudgetTooLarge { budget, available: gens.len() });
    }
    let n_phi = phi.declared_steps().unwrap_or(1);
    let metrics = term_metrics(phi, n_phi);
    let sufficiency_budget = gens.len().min(phi.q() * metrics.v.max(1) + metrics.v);
    let indiscernible = order_indiscernible(m, gens, n_phi + 1)?;
    let stretcher = Stretcher::new(m, gens, n_phi)?;
    let mut failing_prefix = None;
    for s in 0..=budget {
        let indices: Vec<Ordinal> = Ordinal::first_n(s as u64);
        let p = stretcher.prefix(&indices)?;
        if let Some(env) = find_violation(&p.structure, phi)? {
            let assignment = env.into_iter().map(|(v, e)| (v, p.labels[e].clone())).collect();
            failing_prefix = Some(FailingPrefix { prefix: p.report(), assignment });
            break;
        }
    }
    let verdict = if failing_prefix.is_none() && indiscernible {
        StretchVerdict::VerifiedToBudget
    } else {
        StretchVerdict::Refuted
    };
    Ok(StretchReport {
        verdict,
        generators: gens.to_vec(),
        n_phi,
        order_indiscernible: indiscernible,
        pattern_budget: budget,
        sufficiency_budget,
        indiscernible_count: compute_n(phi, n_phi),
        exhaustive: budget >= sufficiency_budget,
        failing_prefix,
        flavor_definitions: "operational",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::structures::satisfies;

    fn ords(s: &str) -> Vec<Ordinal> {
        s.split(',').map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn order_only_prefix_is_a_chain() {
        let fx = catalog::fixture("order_only").unwrap();
        let p = stretch_prefix(&fx.model, &fx.generators, &ords("0,w,w*2"), 1).unwrap();
        assert_eq!(p.size(), 3);
        assert_eq!(p.labels, ["c[0]", "c[w]", "c[w*2]"]);
    }

    #[test]
    fn mono3_prefixes_depend_on_order_type_only() {
        let fx = catalog::fixture("mono3").unwrap();
        let st = Stretcher::new(&fx.model, &fx.generators, 1).unwrap();
        let a = st.prefix(&ords("0,1")).unwrap();
        let b = st.prefix(&ords("0,w")).unwrap();
        assert_eq!(a.structure, b.structure);
        assert_eq!(b.labels, ["g(c[0])", "c[0]", "g(c[w])", "c[w]"]);
    }

    #[test]
    fn mono3_nested_prefixes_embed() {
        let fx = catalog::fixture("mono3").unwrap();
        let st = Stretcher::new(&fx.model, &fx.generators, 1).unwrap();
        let small = st.prefix(&ords("w")).unwrap();
        let large = st.prefix(&ords("0,w,w*2")).unwrap();
        assert_eq!(st.embed(&small, &large).unwrap(), vec![2, 3]);
    }

    #[test]
    fn mono3_stretches_past_its_generators() {
        let fx = catalog::fixture("mono3").unwrap();
        let st = Stretcher::new(&fx.model, &fx.generators, 1).unwrap();
        let p = st.prefix(&ords("0,1,w,w+1,w*2")).unwrap();
        assert_eq!(p.size(), 10);
        assert!(satisfies(&p.structure, &fx.sentence).unwrap());
        assert!(st.monotone_in(&p).unwrap());
    }

    #[test]
    fn mono3_verified_and_mutation_refuted() {
        let fx = catalog::fixture("mono3").unwrap();
        let r = verify_stretch(&fx.sentence, &fx.model, &fx.generators, 3).unwrap();
        assert_eq!(r.verdict, StretchVerdict::VerifiedToBudget);
        assert!(r.exhaustive);
        let mut bad = fx.model.clone();
        bad.set_function(0, &[3], 0);
        let r = verify_stretch(&fx.sentence, &bad, &fx.generators, 3).unwrap();
        assert_eq!(r.verdict, StretchVerdict::Refuted);
        assert_eq!(r.failing_prefix.unwrap().prefix.indices, ["0", "1"]);
        // only patterns through the third generator see g(5)
        let mut bad = fx.model.clone();
        bad.set_function(0, &[5], 0);
        let r = verify_stretch(&fx.sentence, &bad, &fx.generators, 3).unwrap();
        assert_eq!(r.verdict, StretchVerdict::Refuted);
        assert!(!r.order_indiscernible);
    }

    #[test]
    fn example_stretch_with_cofinal_complement() {
        // P = {0,1,2}; i pairs a = 3, 4, 5 with 0, 1, 2
        let phi = catalog::example_sentence();
        let m = FiniteStructure::from_json(
            r#"{"size":6,"functions":{"i":[0,1,2,0,1,2]},"relations":{"P":[[0],[1],[2]]},"constants":{"a":3}}"#,
            phi.signature(),
        )
        .unwrap();
        assert!(satisfies(&m, &phi).unwrap());
        let gens = [4, 5];
        let r = verify_stretch(&phi, &m, &gens, 2).unwrap();
        assert_eq!(r.verdict, StretchVerdict::VerifiedToBudget);
        let p = stretch_prefix(&m, &gens, &ords("0,w,w*2"), 2).unwrap();
        assert_eq!(p.size(), 8);
        assert!(satisfies(&p.structure, &phi).unwrap());
    }

    #[test]
    fn capacity_is_reported() {
        let sig = crate::logic::parse_sentence("fn h/2\nforall x . x = x").unwrap().signature().clone();
        let m = FiniteStructure::from_tables(sig, 2, vec![vec![0, 0, 0, 0]], vec![], vec![]).unwrap();
        let err = stretch_prefix(&m, &[0, 1], &ords("0,1,2"), 1).unwrap_err();
        assert_eq!(err, StretchError::Capacity { needed: 3, available: 2 });
        assert!(matches!(
            verify_stretch(&crate::logic::parse_sentence("forall x . x = x").unwrap(), &m, &[0, 1], 3),
            Err(StretchError::BudgetTooLarge { .. })
        ));
    }
}
