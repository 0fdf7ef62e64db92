//! Bounded certification of the two locality conditions: models are closed
//! under generated substructures, and closure stabilizes within a declared
//! number of steps. Both are checked over every model up to a size bound.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::logic::UniversalSentence;
use crate::spectrum::{enumerate_models, Completion, SearchOptions, SpectrumError};
use crate::structures::{closure, generated_substructure, satisfies, ElementSet, FiniteStructure, StructureDocument};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityOptions {
    pub search: SearchOptions,
    /// Largest model size whose subsets are enumerated exhaustively.
    pub exhaustive_limit: usize,
    /// Subsets sampled per model above the exhaustive limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for LocalityOptions {
    fn default() -> Self {
        LocalityOptions { search: SearchOptions::default(), exhaustive_limit: 6, samples: 256, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetRegime {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeRegime {
    pub size: usize,
    pub regime: SubsetRegime,
    pub models: usize,
}

/// A model and a subset of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub model: StructureDocument,
    pub subset: Vec<usize>,
    pub closure: Vec<usize>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionA {
    Pass,
    /// The substructure generated by `subset` is not a model.
    Counterexample(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub sentence_id: String,
    pub bound: usize,
    pub declared_steps: usize,
    pub condition_a: ConditionA,
    pub max_observed_depth: usize,
    pub depth_witness: Option<Witness>,
    /// Witness whose closure depth exceeds the declared bound.
    pub depth_counterexample: Option<Witness>,
    pub verdict: Verdict,
    /// False when the model search ran out of budget at some size.
    pub complete: bool,
    pub regimes: Vec<SizeRegime>,
}

/// Result of walking every (model, subset) pair up to the bound.
#[derive(Debug, Clone)]
pub struct Scan {
    pub condition_a: ConditionA,
    pub max_depth: usize,
    pub depth_witness: Option<Witness>,
    pub complete: bool,
    pub regimes: Vec<SizeRegime>,
}

fn subsets(size: usize, model_index: usize, opts: &LocalityOptions) -> Vec<ElementSet> {
    if size <= opts.exhaustive_limit {
        (0..1u64 << size).map(|bits| ElementSet::from_bits(size, bits)).collect()
    } else {
        let seed = opts.seed ^ ((size as u64) << 32) ^ model_index as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..opts.samples)
            .map(|_| {
                let mut s = ElementSet::empty(size);
                for e in 0..size {
                    if rng.gen_bool(0.5) {
                        s.insert(e);
                    }
                }
                s
            })
            .collect()
    }
}

fn witness(m: &FiniteStructure, x: &ElementSet) -> Witness {
    let (cl, depth) = closure(m, x);
    Witness { model: m.document(), subset: x.to_vec(), closure: cl.to_vec(), depth }
}

/// Walk every model of size `0..=bound` and every subset (exhaustive or
/// sampled), recording the first substructure failure and the deepest closure.
pub fn scan(phi: &UniversalSentence, bound: usize, opts: &LocalityOptions) -> Result<Scan, SpectrumError> {
    let mut out = Scan { condition_a: ConditionA::Pass, max_depth: 0, depth_witness: None, complete: true, regimes: Vec::new() };
    for size in 0..=bound {
        let mut models = 0;
        let mut failure = None;
        let done = enumerate_models(phi, size, &opts.search, |m| {
            for x in subsets(size, models, opts) {
                let (_, depth) = closure(m, &x);
                if depth > out.max_depth || out.depth_witness.is_none() {
                    out.max_depth = out.max_depth.max(depth);
                    out.depth_witness = Some(witness(m, &x));
                }
                if matches!(out.condition_a, ConditionA::Pass) {
                    let holds = match generated_substructure(m, &x) {
                        Ok((sub, _)) => satisfies(&sub, phi),
                        Err(e) => Err(e),
                    };
                    match holds {
                        Ok(true) => {}
                        Ok(false) => out.condition_a = ConditionA::Counterexample(witness(m, &x)),
                        Err(e) => {
                            failure = Some(e);
                            return ControlFlow::Break(());
                        }
                    }
                }
            }
            models += 1;
            ControlFlow::Continue(())
        })?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        if done == Completion::BudgetExceeded {
            out.complete = false;
        }
        let regime = if size <= opts.exhaustive_limit {
            SubsetRegime::Exhaustive
        } else {
            SubsetRegime::Sampled { seed: opts.seed, samples: opts.samples }
        };
        out.regimes.push(SizeRegime { size, regime, models });
    }
    Ok(out)
}

pub fn check_condition_a(phi: &UniversalSentence, bound: usize, opts: &LocalityOptions) -> Result<(ConditionA, bool), SpectrumError> {
    let s = scan(phi, bound, opts)?;
    Ok((s.condition_a, s.complete))
}

/// Largest closure depth over models up to `bound`, with the first pair
/// attaining it.
pub fn max_closure_depth(phi: &UniversalSentence, bound: usize, opts: &LocalityOptions) -> Result<(usize, Option<Witness>), SpectrumError> {
    let s = scan(phi, bound, opts)?;
    Ok((s.max_depth, s.depth_witness))
}

/// Refuted iff some generated substructure fails `phi` or some closure
/// needs more than `declared_steps` steps, within the size bound.
pub fn certify(
    sentence_id: &str,
    phi: &UniversalSentence,
    declared_steps: usize,
    bound: usize,
    opts: &LocalityOptions,
) -> Result<LocalityReport, SpectrumError> {
    let s = scan(phi, bound, opts)?;
    let depth_counterexample = s.depth_witness.clone().filter(|w| w.depth > declared_steps);
    let refuted = matches!(s.condition_a, ConditionA::Counterexample(_)) || depth_counterexample.is_some();
    Ok(LocalityReport {
        sentence_id: sentence_id.to_string(),
        bound,
        declared_steps,
        condition_a: s.condition_a,
        max_observed_depth: s.max_depth,
        depth_witness: s.depth_witness,
        depth_counterexample,
        verdict: if refuted { Verdict::Refuted } else { Verdict::Consistent },
        complete: s.complete,
        regimes: s.regimes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;
    use crate::structures::tests::EXAMPLE;

    #[test]
    fn example_refuted_at_one_step() {
        let phi = parse_sentence(EXAMPLE).unwrap();
        let r = certify("example", &phi, 1, 3, &LocalityOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let w = r.depth_counterexample.unwrap();
        assert_eq!(w.subset, Vec::<usize>::new());
        assert_eq!(w.depth, 2);
        assert_eq!(r.condition_a, ConditionA::Pass);
    }

    #[test]
    fn tautology_is_consistent() {
        let phi = parse_sentence("forall x . x = x").unwrap();
        let r = certify("tautology", &phi, 1, 3, &LocalityOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.max_observed_depth <= 1);
    }

    #[test]
    fn successor_like_function_passes_condition_a() {
        let phi = parse_sentence("fn f/1\nconst b\nforall x . x < f(x) | (x = b & f(x) = b)").unwrap();
        let (a, complete) = check_condition_a(&phi, 3, &LocalityOptions::default()).unwrap();
        assert!(complete);
        assert_eq!(a, ConditionA::Pass);
    }

    #[test]
    fn sampled_regime_above_limit() {
        let phi = parse_sentence("rel P/1\nforall x . P(x) | !P(x)").unwrap();
        let opts = LocalityOptions { exhaustive_limit: 1, samples: 4, ..LocalityOptions::default() };
        let s = scan(&phi, 2, &opts).unwrap();
        assert_eq!(s.regimes[2].regime, SubsetRegime::Sampled { seed: 0, samples: 4 });
        assert_eq!(s.regimes[2].models, 4);
    }
}
