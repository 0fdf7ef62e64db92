//! Finite model search and finite spectra. Because `<` is the natural order,
//! a model of order type `m` is a model of size `m`.

mod search;

pub use search::Completion;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::logic::UniversalSentence;
use crate::structures::{FiniteStructure, StructureDocument, StructureError};
use search::Search;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("blind search over `{symbol}` (arity {arity}) is disabled; supply candidate structures or allow high arity")]
    HighArity { symbol: String, arity: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of cell assignments tried per size.
    pub budget: u64,
    /// Permit search over functions of arity 3 or more.
    pub allow_high_arity: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 50_000_000, allow_high_arity: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSearch {
    /// The lexicographically least model of the requested size.
    Found(FiniteStructure),
    /// No model of this size exists.
    Exhausted,
    /// The budget ran out before the question was settled.
    Unknown,
}

pub fn find_model(phi: &UniversalSentence, size: usize, opts: &SearchOptions) -> Result<ModelSearch, SpectrumError> {
    let mut found = None;
    let mut search = Search::new(phi, size, opts)?;
    let done = search.run(&mut |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    Ok(match (found, done) {
        (Some(m), _) => ModelSearch::Found(m),
        (None, Completion::BudgetExceeded) => ModelSearch::Unknown,
        (None, _) => ModelSearch::Exhausted,
    })
}

/// Visit every model of size `size`, in the same order `find_model` uses.
pub fn enumerate_models(
    phi: &UniversalSentence,
    size: usize,
    opts: &SearchOptions,
    mut visit: impl FnMut(&FiniteStructure) -> ControlFlow<()>,
) -> Result<Completion, SpectrumError> {
    let mut search = Search::new(phi, size, opts)?;
    Ok(search.run(&mut visit))
}

/// Every model of size `size`, or `None` if the budget ran out.
pub fn all_models(phi: &UniversalSentence, size: usize, opts: &SearchOptions) -> Result<Option<Vec<FiniteStructure>>, SpectrumError> {
    let mut out = Vec::new();
    let done = enumerate_models(phi, size, opts, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    Ok((done == Completion::Exhausted).then_some(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumResult {
    pub sentence_id: String,
    pub bound: usize,
    /// Sizes in `0..=bound` admitting a model.
    pub members: Vec<usize>,
    /// Sizes whose search ran out of budget.
    pub unknown: Vec<usize>,
    pub witnesses: BTreeMap<usize, StructureDocument>,
}

impl SpectrumResult {
    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty()
    }
}

/// Exact finite spectrum up to `max_size`, sizes searched in parallel.
pub fn finite_spectrum(
    sentence_id: &str,
    phi: &UniversalSentence,
    max_size: usize,
    opts: &SearchOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let outcomes = (0..=max_size)
        .into_par_iter()
        .map(|m| find_model(phi, m, opts).map(|r| (m, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut result = SpectrumResult {
        sentence_id: sentence_id.to_string(),
        bound: max_size,
        members: Vec::new(),
        unknown: Vec::new(),
        witnesses: BTreeMap::new(),
    };
    for (m, outcome) in outcomes {
        match outcome {
            ModelSearch::Found(w) => {
                result.members.push(m);
                result.witnesses.insert(m, w.document());
            }
            ModelSearch::Unknown => result.unknown.push(m),
            ModelSearch::Exhausted => {}
        }
    }
    Ok(result)
}
