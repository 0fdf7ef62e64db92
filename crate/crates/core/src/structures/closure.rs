//! The closure operator: one step adds constants and all function images of
//! tuples from the current set.

use serde::{Serialize, Serializer};

use super::{for_each_tuple, table_len, FiniteStructure, StructureError};

/// A subset of `{0, .., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    mask: Vec<bool>,
}

impl ElementSet {
    pub fn empty(size: usize) -> Self {
        ElementSet { mask: vec![false; size] }
    }

    pub fn full(size: usize) -> Self {
        ElementSet { mask: vec![true; size] }
    }

    pub fn from_elements(size: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self, StructureError> {
        let mut s = Self::empty(size);
        for e in elements {
            if e >= size {
                return Err(StructureError::OutOfRange { element: e, size });
            }
            s.mask[e] = true;
        }
        Ok(s)
    }

    /// Bit `i` of `bits` selects element `i`.
    pub fn from_bits(size: usize, bits: u64) -> Self {
        ElementSet { mask: (0..size).map(|i| bits >> i & 1 == 1).collect() }
    }

    pub fn universe_size(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mask.get(e).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, e: usize) -> bool {
        let was = self.mask[e];
        self.mask[e] = true;
        !was
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

/// `X ∪ {f(x̄) : f a function, x̄ ∈ X^k} ∪ {constants}`.
pub fn closure_step(m: &FiniteStructure, x: &ElementSet) -> ElementSet {
    debug_assert_eq!(x.universe_size(), m.size());
    let mut out = x.clone();
    for &c in m.constant_values() {
        out.insert(c);
    }
    let elems = x.to_vec();
    for (fi, f) in m.signature().functions().iter().enumerate() {
        let table = m.function_table(fi);
        debug_assert_eq!(table.len(), table_len(m.size(), f.arity));
        for_each_tuple(elems.len(), f.arity, |idx| {
            let index = idx.iter().fold(0, |acc, &i| acc * m.size() + elems[i]);
            out.insert(table[index]);
        });
    }
    out
}

/// The closure of `x` and the least `n ≥ 1` with `cl^n(x) = cl(x)`.
pub fn closure(m: &FiniteStructure, x: &ElementSet) -> (ElementSet, usize) {
    let mut current = closure_step(m, x);
    let mut depth = 1;
    loop {
        let next = closure_step(m, &current);
        if next == current {
            return (current, depth);
        }
        current = next;
        depth += 1;
    }
}

/// The substructure on `cl(x)`, re-indexed order-preservingly onto an
/// initial segment, and the embedding `new index -> old element`.
pub fn generated_substructure(m: &FiniteStructure, x: &ElementSet) -> Result<(FiniteStructure, Vec<usize>), StructureError> {
    let (cl, _) = closure(m, x);
    substructure_on(m, &cl)
}

/// Restriction of `m` to a set closed under functions and containing the
/// constants.
pub(crate) fn substructure_on(m: &FiniteStructure, set: &ElementSet) -> Result<(FiniteStructure, Vec<usize>), StructureError> {
    let embedding = set.to_vec();
    let size = embedding.len();
    let mut position = vec![usize::MAX; m.size()];
    for (new, &old) in embedding.iter().enumerate() {
        position[old] = new;
    }
    let sig = m.signature().clone();
    let mut functions = Vec::new();
    for (fi, f) in sig.functions().iter().enumerate() {
        let mut table = Vec::with_capacity(table_len(size, f.arity));
        let mut escaped = None;
        for_each_tuple(size, f.arity, |idx| {
            let args: Vec<usize> = idx.iter().map(|&i| embedding[i]).collect();
            let v = m.function_value(fi, &args);
            if position[v] == usize::MAX {
                escaped = Some(v);
            }
            table.push(position[v]);
        });
        if let Some(v) = escaped {
            return Err(StructureError::OutOfRange { element: v, size });
        }
        functions.push(table);
    }
    let mut relations = Vec::new();
    for (ri, r) in sig.relations().iter().enumerate() {
        let mut table = Vec::with_capacity(table_len(size, r.arity));
        for_each_tuple(size, r.arity, |idx| {
            let args: Vec<usize> = idx.iter().map(|&i| embedding[i]).collect();
            table.push(m.relation_holds(ri, &args));
        });
        relations.push(table);
    }
    let mut constants = Vec::new();
    for &c in m.constant_values() {
        if position[c] == usize::MAX {
            return Err(StructureError::OutOfRange { element: c, size });
        }
        constants.push(position[c]);
    }
    let sub = FiniteStructure::from_tables(sig, size, functions, relations, constants)?;
    Ok((sub, embedding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;
    use crate::structures::satisfies;
    use crate::structures::tests::EXAMPLE;

    fn model() -> FiniteStructure {
        let phi = parse_sentence(EXAMPLE).unwrap();
        let doc = r#"{"size":3,"functions":{"i":[0,1,0]},"relations":{"P":[[0],[1]]},"constants":{"a":2}}"#;
        FiniteStructure::from_json(doc, phi.signature()).unwrap()
    }

    #[test]
    fn step_from_empty_adds_constants() {
        let m = model();
        assert_eq!(closure_step(&m, &ElementSet::empty(3)).to_vec(), vec![2]);
        let x = ElementSet::from_elements(3, [2]).unwrap();
        assert_eq!(closure_step(&m, &x).to_vec(), vec![0, 2]);
        assert_eq!(closure_step(&m, &ElementSet::full(3)), ElementSet::full(3));
    }

    #[test]
    fn closure_depth() {
        let m = model();
        let (cl, depth) = closure(&m, &ElementSet::empty(3));
        assert_eq!((cl.to_vec(), depth), (vec![0, 2], 2));
        let (again, d) = closure(&m, &cl);
        assert_eq!((again, d), (cl, 1));
    }

    #[test]
    fn generated_from_empty_is_minimal_model() {
        let phi = parse_sentence(EXAMPLE).unwrap();
        let m = model();
        let (sub, emb) = generated_substructure(&m, &ElementSet::empty(3)).unwrap();
        assert_eq!(emb, vec![0, 2]);
        assert_eq!(
            sub.to_json(),
            r#"{"size":2,"functions":{"i":[0,0]},"relations":{"P":[[0]]},"constants":{"a":1}}"#
        );
        assert!(satisfies(&sub, &phi).unwrap());
        let (whole, emb) = generated_substructure(&m, &ElementSet::full(3)).unwrap();
        assert_eq!((whole, emb), (m, vec![0, 1, 2]));
    }

    #[test]
    fn segment_closure_under_i() {
        // segments {0,1} and {2,3}: I maps to the last element
        let phi = parse_sentence("fn I/1\nrel P/1\nforall y . I(y) = y <-> P(y)").unwrap();
        let doc = r#"{"size":4,"functions":{"I":[1,1,3,3]},"relations":{"P":[[1],[3]]},"constants":{}}"#;
        let m = FiniteStructure::from_json(doc, phi.signature()).unwrap();
        let x = ElementSet::from_elements(4, [2]).unwrap();
        let (sub, emb) = generated_substructure(&m, &x).unwrap();
        assert_eq!(emb, vec![2, 3]);
        assert_eq!(sub.function_table(0), &[1, 1]);
        assert_eq!(closure(&m, &x).1, 1);
    }
}
