//! Shipped sentences and witness models. Fixed entries live as `.lsq` files
//! next to the crate; the segment sentences are generated for each `n`.

mod segments;

pub use segments::{build_segment_model, segment_signature, Segments};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{conjoin, parse_sentence, union_sentence, LogicError, UniversalSentence};
use crate::structures::{FiniteStructure, StructureDocument, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("no catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("parameter n = {n} is out of range for {what}")]
    Parameter { what: &'static str, n: usize },
    #[error("f({nu}, {ys:?}) = {value}: {reason}")]
    SegmentSpec { nu: usize, ys: Vec<usize>, value: usize, reason: String },
    #[error("bad fixture `{0}`: {1}")]
    Fixture(String, String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedSpectrum {
    pub bound: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub source: String,
    pub declared_steps: Option<usize>,
    pub expected_spectrum: Option<ExpectedSpectrum>,
    pub note: String,
}

impl CatalogEntry {
    pub fn sentence(&self) -> Result<UniversalSentence, CatalogError> {
        Ok(parse_sentence(&self.source)?)
    }

    /// Has a function of arity 3 or more, so blind search must be enabled
    /// explicitly.
    pub fn high_arity(&self) -> bool {
        self.sentence().is_ok_and(|s| s.signature().max_function_arity() >= 3)
    }
}

#[derive(Deserialize)]
struct IndexRow {
    id: String,
    file: String,
    expected_spectrum: ExpectedSpectrum,
    note: String,
}

const INDEX: &str = include_str!("../../catalog/index.json");

const FILES: &[(&str, &str)] = &[
    ("example.lsq", include_str!("../../catalog/example.lsq")),
    ("psi1.lsq", include_str!("../../catalog/psi1.lsq")),
    ("order_only.lsq", include_str!("../../catalog/order_only.lsq")),
    ("tautology.lsq", include_str!("../../catalog/tautology.lsq")),
    ("contradiction.lsq", include_str!("../../catalog/contradiction.lsq")),
    ("phi0_placeholder.lsq", include_str!("../../catalog/phi0_placeholder.lsq")),
    ("two_or_four.lsq", include_str!("../../catalog/two_or_four.lsq")),
    ("exactly_three.lsq", include_str!("../../catalog/exactly_three.lsq")),
    ("nonlocal_pred.lsq", include_str!("../../catalog/nonlocal_pred.lsq")),
    ("mono3.lsq", include_str!("../../catalog/mono3.lsq")),
];

const FIXTURES: &[(&str, &str)] = &[
    ("mono3", include_str!("../../catalog/mono3.fixture.json")),
    ("order_only", include_str!("../../catalog/order_only.fixture.json")),
];

fn file(name: &str) -> &'static str {
    FILES.iter().find(|(f, _)| *f == name).map(|(_, s)| *s).expect("index names a shipped file")
}

/// The shipped entries followed by the generated segment sentences for
/// `n = 1`.
pub fn entries() -> Vec<CatalogEntry> {
    let rows: Vec<IndexRow> = serde_json::from_str(INDEX).expect("catalog index is valid JSON");
    let mut out: Vec<CatalogEntry> = rows
        .into_iter()
        .map(|r| {
            let source = file(&r.file).to_string();
            let declared_steps = parse_sentence(&source).ok().and_then(|s| s.declared_steps());
            CatalogEntry { id: r.id, source, declared_steps, expected_spectrum: Some(r.expected_spectrum), note: r.note }
        })
        .collect();
    let generated = [
        ("psi2_1", psi2_source(1), None, "segment partitions coded by a 4-ary f"),
        ("psi3_1", psi3_source(1), None, "every 6 increasing P-elements contain a non-homogeneous tail"),
        ("psi12_1", psi12_source(1), Some(2), "segments with their partition function; closure takes two steps"),
    ];
    // small P leaves f unconstrained, so every size has a model
    for (id, source, steps, note) in generated {
        out.push(CatalogEntry {
            id: id.into(),
            source,
            declared_steps: steps,
            expected_spectrum: Some(ExpectedSpectrum { bound: 4, members: (0..=4).collect() }),
            note: note.into(),
        });
    }
    out
}

pub fn entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    entries().into_iter().find(|e| e.id == id).ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))
}

pub fn sentence(id: &str) -> Result<UniversalSentence, CatalogError> {
    entry(id)?.sentence()
}

/// `{<, P, i, a}`, three variables, closure in two steps.
pub fn example_sentence() -> UniversalSentence {
    parse_sentence(file("example.lsq")).expect("shipped sentence parses")
}

pub fn psi1() -> UniversalSentence {
    parse_sentence(file("psi1.lsq")).expect("shipped sentence parses")
}

/// The sentence with no nonempty model that fills the second slot of the
/// `phi_n` scaffold.
pub fn phi0_placeholder() -> UniversalSentence {
    parse_sentence(file("phi0_placeholder.lsq")).expect("shipped sentence parses")
}

fn check_n(n: usize, what: &'static str) -> Result<(), CatalogError> {
    if n == 0 {
        Err(CatalogError::Parameter { what, n })
    } else {
        Ok(())
    }
}

fn join(parts: impl IntoIterator<Item = String>, sep: &str) -> String {
    parts.into_iter().join(sep)
}

fn segment_header(n: usize) -> String {
    format!("fn I/1\nfn f/{}\nrel P/1\n", n + 3)
}

fn f_term(nu: &str, ys: &[String]) -> String {
    format!("f({nu},{})", ys.join(","))
}

fn pairs_of(ys: &[String], atom: impl Fn(&str, &str) -> String) -> Vec<String> {
    ys.iter().tuple_combinations().map(|(a, b)| atom(a, b)).collect()
}

pub fn psi2_source(n: usize) -> String {
    let ys: Vec<String> = (1..=n + 2).map(|i| format!("y{i}")).collect();
    let iys: Vec<String> = ys.iter().map(|y| format!("I({y})")).collect();
    let f = f_term("nu", &ys);
    let increasing = join(pairs_of(&ys, |a, b| format!("I({a}) < I({b})")), " & ");
    let not_increasing = join(pairs_of(&ys, |a, b| format!("!(I({a}) < I({b}))")), " | ");
    format!(
        "{}forall nu {} .\n  {f} = {}\n  & (({not_increasing}) -> {f} = I(nu))\n  & (({increasing}) -> I({f}) = I(nu))\n  & (({increasing}) -> !P({f}))\n",
        segment_header(n),
        ys.join(" "),
        f_term("I(nu)", &iys),
    )
}

/// Every `n+5` increasing elements of `P` contain, among their first three,
/// some `nu` whose tail is split by `f(nu, -)`. The disjunction runs over all
/// ordered pairs of `(n+2)`-subsets, exactly as written, so it has
/// `3 * C(n+5, n+2)^2` disjuncts.
pub fn psi3_source(n: usize) -> String {
    let xs: Vec<String> = (1..=n + 5).map(|i| format!("x{i}")).collect();
    let increasing = join(pairs_of(&xs, |a, b| format!("{a} < {b}")), " & ");
    let subsets: Vec<Vec<String>> = xs.iter().cloned().combinations(n + 2).collect();
    let chain = |nu: &str, ys: &[String]| {
        let mut links = vec![format!("{nu} < {}", ys[0])];
        links.extend(ys.windows(2).map(|w| format!("{} < {}", w[0], w[1])));
        links.join(" & ")
    };
    let mut disjuncts = Vec::new();
    for nu in &xs[..3] {
        for ys in &subsets {
            for zs in &subsets {
                disjuncts.push(format!(
                    "({} & {} & !({} = {}))",
                    chain(nu, ys),
                    chain(nu, zs),
                    f_term(nu, ys),
                    f_term(nu, zs)
                ));
            }
        }
    }
    format!(
        "{}forall {} in P .\n  ({increasing}) ->\n  ({})\n",
        segment_header(n),
        xs.join(" "),
        disjuncts.join("\n  | ")
    )
}

fn psi12_source(n: usize) -> String {
    let psi = psi12(n).expect("n = 1 is in range");
    crate::logic::print_sentence(&psi)
}

pub fn psi2(n: usize) -> Result<UniversalSentence, CatalogError> {
    check_n(n, "psi2")?;
    Ok(parse_sentence(&psi2_source(n))?)
}

pub fn psi3(n: usize) -> Result<UniversalSentence, CatalogError> {
    check_n(n, "psi3")?;
    if n > 2 {
        return Err(CatalogError::Parameter { what: "psi3 (use psi3_unbounded for n > 2)", n });
    }
    psi3_unbounded(n)
}

/// `psi3` without the size cap. The disjunction grows as `C(n+5, 3)^2`.
pub fn psi3_unbounded(n: usize) -> Result<UniversalSentence, CatalogError> {
    check_n(n, "psi3")?;
    Ok(parse_sentence(&psi3_source(n))?)
}

/// `psi1 & psi2(n)`, local with closure in two steps.
pub fn psi12(n: usize) -> Result<UniversalSentence, CatalogError> {
    Ok(conjoin(&psi1(), &psi2(n)?)?.with_declared_steps(Some(2))?)
}

/// `psi1 & psi2(n) & psi3(n)` for `n` in `1..=2`.
pub fn theta(n: usize) -> Result<UniversalSentence, CatalogError> {
    Ok(conjoin(&psi12(n)?, &psi3(n)?)?.with_declared_steps(Some(2))?)
}

/// `theta` for any `n >= 1`; expect large sentences past `n = 2`.
pub fn theta_unbounded(n: usize) -> Result<UniversalSentence, CatalogError> {
    Ok(conjoin(&psi12(n)?, &psi3_unbounded(n)?)?.with_declared_steps(Some(2))?)
}

/// `theta(n)` united with the placeholder in the `phi_0` slot.
pub fn phi_scaffold(n: usize) -> Result<UniversalSentence, CatalogError> {
    Ok(union_sentence(&theta(n)?, &phi0_placeholder())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFlags {
    pub order_indiscernible: bool,
    pub monotonic: bool,
    pub special: bool,
    pub remarkable: bool,
    pub semi_monotonic: String,
}

#[derive(Deserialize)]
struct FixtureDocument {
    sentence: String,
    model: StructureDocument,
    generators: Vec<usize>,
    flags: ExpectedFlags,
}

/// A model generated by indiscernibles, with hand-evaluated flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchFixture {
    pub sentence: UniversalSentence,
    pub model: FiniteStructure,
    pub generators: Vec<usize>,
    pub flags: ExpectedFlags,
}

pub fn fixture(id: &str) -> Result<StretchFixture, CatalogError> {
    let text = FIXTURES
        .iter()
        .find(|(f, _)| *f == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))?;
    let doc: FixtureDocument =
        serde_json::from_str(text).map_err(|e| CatalogError::Fixture(id.to_string(), e.to_string()))?;
    let sentence = sentence(&doc.sentence)?;
    let model = FiniteStructure::from_document(&doc.model, sentence.signature())?;
    Ok(StretchFixture { sentence, model, generators: doc.generators, flags: doc.flags })
}

pub fn fixture_ids() -> Vec<&'static str> {
    FIXTURES.iter().map(|(id, _)| *id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::print_sentence;
    use crate::structures::satisfies;

    #[test]
    fn every_entry_parses_and_round_trips() {
        for e in entries() {
            let phi = e.sentence().unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert_eq!(parse_sentence(&print_sentence(&phi)).unwrap(), phi, "{}", e.id);
        }
    }

    #[test]
    fn example_shape() {
        let phi = example_sentence();
        assert_eq!(phi.q(), 3);
        assert_eq!(phi.declared_steps(), Some(2));
        let sig = phi.signature();
        assert!(sig.function_index("i").is_some() && sig.relation_index("P").is_some());
        assert_eq!(sig.constants(), ["a"]);
    }

    #[test]
    fn psi2_arity_and_variables() {
        for n in 1..=3 {
            let phi = psi2(n).unwrap();
            assert_eq!(phi.signature().function_index("f").map(|i| phi.signature().functions()[i].arity), Some(n + 3));
            assert_eq!(phi.q(), n + 3);
        }
        assert!(psi2(0).is_err());
    }

    #[test]
    fn psi3_disjunct_count() {
        let src = psi3_source(1);
        assert_eq!(src.matches("!(f(").count(), 3 * 20 * 20);
        assert_eq!(psi3(1).unwrap().q(), 6);
        assert!(matches!(psi3(3), Err(CatalogError::Parameter { .. })));
    }

    #[test]
    fn theta_merges_signatures() {
        let th = theta(1).unwrap();
        let sig = th.signature();
        assert_eq!(sig.functions().len(), 2);
        assert_eq!(sig.relations().len(), 1);
        assert_eq!(th.declared_steps(), Some(2));
        assert!(phi_scaffold(1).is_ok());
    }

    #[test]
    fn fixtures_satisfy_their_sentences() {
        for id in fixture_ids() {
            let fx = fixture(id).unwrap();
            assert!(satisfies(&fx.model, &fx.sentence).unwrap(), "{id}");
        }
    }
}
