//! Finite prefixes of the stretched model. An element is a term shape over
//! a set of index positions; any two elements are compared in `M` after
//! sending the union of their indices, in order, to the first generators.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::ordinals::Ordinal;
use crate::structures::{for_each_tuple, FiniteStructure, StructureDocument};

use super::classify::check_generators;
use super::terms::{term_table, Shape};
use super::StretchError;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Element {
    shape: Shape,
    /// Positions in the index set, increasing; `Var(i)` reads `support[i]`.
    support: Vec<usize>,
}

/// The substructure of the stretched model generated by the indiscernibles
/// at `indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchPrefix {
    pub indices: Vec<Ordinal>,
    /// Universe sorted by the induced order.
    pub structure: FiniteStructure,
    /// Representative term of each element, e.g. `g(c[w])`.
    pub labels: Vec<String>,
    elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub indices: Vec<String>,
    pub labels: Vec<String>,
    pub model: StructureDocument,
}

impl StretchPrefix {
    pub fn size(&self) -> usize {
        self.structure.size()
    }

    pub fn report(&self) -> PrefixReport {
        PrefixReport {
            indices: self.indices.iter().map(Ordinal::to_string).collect(),
            labels: self.labels.clone(),
            model: self.structure.document(),
        }
    }
}

/// Builds prefixes and embeddings for one generated model.
pub struct Stretcher<'a> {
    m: &'a FiniteStructure,
    gens: &'a [usize],
    /// `shapes[l]`: terms using all of `l` variables, up to `n_phi` applications.
    shapes: Vec<Vec<Shape>>,
}

impl<'a> Stretcher<'a> {
    pub fn new(m: &'a FiniteStructure, gens: &'a [usize], n_phi: usize) -> Result<Self, StretchError> {
        check_generators(m, gens)?;
        let shapes = (0..=gens.len())
            .map(|l| {
                let tuples: Vec<Vec<usize>> = gens.iter().copied().combinations(l).collect();
                let table = term_table(m, l, n_phi, &tuples)?;
                Ok(table.shapes.into_iter().filter(|s| s.uses_all(l)).collect())
            })
            .collect::<Result<_, StretchError>>()?;
        Ok(Stretcher { m, gens, shapes })
    }

    /// Values of `elems` in `M` under the order embedding of their joint
    /// support into the first generators.
    fn values(&self, elems: &[&Element]) -> Result<Vec<usize>, StretchError> {
        let union: BTreeSet<usize> = elems.iter().flat_map(|e| e.support.iter().copied()).collect();
        if union.len() > self.gens.len() {
            return Err(StretchError::Capacity { needed: union.len(), available: self.gens.len() });
        }
        let rank = |p: usize| union.range(..p).count();
        Ok(elems
            .iter()
            .map(|e| {
                let env: Vec<usize> = e.support.iter().map(|&p| self.gens[rank(p)]).collect();
                e.shape.eval(self.m, &env)
            })
            .collect())
    }

    fn compare(&self, a: &Element, b: &Element) -> Result<Ordering, StretchError> {
        let v = self.values(&[a, b])?;
        Ok(v[0].cmp(&v[1]))
    }

    fn find_equal(&self, universe: &[Element], e: &Element) -> Result<Option<usize>, StretchError> {
        for (i, u) in universe.iter().enumerate() {
            if self.compare(u, e)? == Ordering::Equal {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn prefix(&self, indices: &[Ordinal]) -> Result<StretchPrefix, StretchError> {
        let mut indices = indices.to_vec();
        indices.sort();
        indices.dedup();
        let sig = self.m.signature();

        let mut universe: Vec<Element> = Vec::new();
        for l in 0..=indices.len().min(self.gens.len()) {
            for support in (0..indices.len()).combinations(l) {
                for shape in &self.shapes[l] {
                    let e = Element { shape: shape.clone(), support: support.clone() };
                    if self.find_equal(&universe, &e)?.is_none() {
                        universe.push(e);
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..universe.len()).collect();
        let mut failure = None;
        order.sort_by(|&a, &b| match self.compare(&universe[a], &universe[b]) {
            Ok(o) => o,
            Err(e) => {
                failure.get_or_insert(e);
                Ordering::Equal
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        for (i, j) in (0..order.len()).tuple_combinations() {
            if self.compare(&universe[order[i]], &universe[order[j]])? != Ordering::Less {
                return Err(StretchError::Incoherent(format!(
                    "elements {} and {} are not strictly ordered",
                    order[i], order[j]
                )));
            }
        }
        let universe: Vec<Element> = order.into_iter().map(|i| universe[i].clone()).collect();

        let size = universe.len();
        let mut structure = FiniteStructure::new(sig.clone(), size)?;
        for (f, sym) in sig.functions().iter().enumerate() {
            let mut err = None;
            for_each_tuple(size, sym.arity, |args| {
                if err.is_some() {
                    return;
                }
                match self.apply(&universe, f, args) {
                    Ok(v) => structure.set_function(f, args, v),
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        for (r, sym) in sig.relations().iter().enumerate() {
            let mut err = None;
            for_each_tuple(size, sym.arity, |args| {
                let elems: Vec<&Element> = args.iter().map(|&a| &universe[a]).collect();
                match self.values(&elems) {
                    Ok(vals) => structure.set_relation(r, args, self.m.relation_holds(r, &vals)),
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        for c in 0..sig.constants().len() {
            let e = Element { shape: Shape::Const(c), support: Vec::new() };
            let at = self.find_equal(&universe, &e)?.expect("closed terms are in every prefix");
            structure.set_constant(c, at);
        }

        let labels = universe
            .iter()
            .map(|e| e.shape.render(sig, &|i| format!("c[{}]", indices[e.support[i]])))
            .collect();
        Ok(StretchPrefix { indices, structure, labels, elements: universe })
    }

    /// `f` applied to prefix elements, as an index into `universe`.
    fn apply(&self, universe: &[Element], f: usize, args: &[usize]) -> Result<usize, StretchError> {
        let elems: Vec<&Element> = args.iter().map(|&a| &universe[a]).collect();
        let support: BTreeSet<usize> = elems.iter().flat_map(|e| e.support.iter().copied()).collect();
        let result = Element {
            shape: Shape::App(
                f,
                elems
                    .iter()
                    .map(|e| {
                        let remap = e.support.iter().map(|p| support.range(..p).count()).collect::<Vec<_>>();
                        reindex(&e.shape, &remap)
                    })
                    .collect(),
            ),
            support: support.into_iter().collect(),
        };
        self.find_equal(universe, &result)?.ok_or_else(|| StretchError::NotClosed {
            function: self.m.signature().functions()[f].name.clone(),
        })
    }

    /// Image of each element of `small` in `large`; `small.indices` must be
    /// a subset of `large.indices`.
    pub fn embed(&self, small: &StretchPrefix, large: &StretchPrefix) -> Result<Vec<usize>, StretchError> {
        let position = |o: &Ordinal| large.indices.binary_search(o).ok();
        let map: Vec<usize> = small
            .indices
            .iter()
            .map(|o| position(o).ok_or_else(|| StretchError::Incoherent(format!("index {o} missing from the larger set"))))
            .collect::<Result<_, _>>()?;
        small
            .elements
            .iter()
            .map(|e| {
                let moved = Element { shape: e.shape.clone(), support: e.support.iter().map(|&p| map[p]).collect() };
                self.find_equal(&large.elements, &moved)?
                    .ok_or_else(|| StretchError::Incoherent("element has no image".into()))
            })
            .collect()
    }

    /// For each term shape and index tuples `a <= b` pointwise, the element
    /// at `a` is at most the element at `b` in `prefix`.
    pub fn monotone_in(&self, prefix: &StretchPrefix) -> Result<bool, StretchError> {
        let width = prefix.indices.len();
        for (l, shapes) in self.shapes.iter().enumerate().take(width + 1) {
            let supports: Vec<Vec<usize>> = (0..width).combinations(l).collect();
            for shape in shapes {
                let at = supports
                    .iter()
                    .map(|s| {
                        let e = Element { shape: shape.clone(), support: s.clone() };
                        self.find_equal(&prefix.elements, &e)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                for (a, b) in (0..supports.len()).cartesian_product(0..supports.len()) {
                    let below = supports[a].iter().zip(&supports[b]).all(|(x, y)| x <= y);
                    if below && at[a] > at[b] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn reindex(shape: &Shape, map: &[usize]) -> Shape {
    match shape {
        Shape::Var(i) => Shape::Var(map[*i]),
        Shape::Const(c) => Shape::Const(*c),
        Shape::App(f, args) => Shape::App(*f, args.iter().map(|a| reindex(a, map)).collect()),
    }
}

/// One-shot prefix over `indices`; see [`Stretcher::prefix`].
pub fn stretch_prefix(
    m: &FiniteStructure,
    gens: &[usize],
    indices: &[Ordinal],
    n_phi: usize,
) -> Result<StretchPrefix, StretchError> {
    Stretcher::new(m, gens, n_phi)?.prefix(indices)
}
