//! Reference implementations that share no code with the library's
//! evaluator or search: structures are read back from their JSON documents
//! and formulas are interpreted straight off the syntax tree.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use locus::logic::{Formula, Signature, Term, UniversalSentence};
use locus::structures::StructureDocument;

#[derive(Debug, Clone, Default)]
pub struct Naive {
    pub size: usize,
    pub consts: HashMap<String, usize>,
    pub funcs: HashMap<String, HashMap<Vec<usize>, usize>>,
    pub rels: HashMap<String, HashSet<Vec<usize>>>,
}

fn tuples(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

impl Naive {
    pub fn from_document(doc: &StructureDocument, sig: &Signature) -> Naive {
        let mut n = Naive { size: doc.size, ..Naive::default() };
        for (name, &v) in &doc.constants {
            n.consts.insert(name.clone(), v);
        }
        for f in sig.functions() {
            let table = &doc.functions[&f.name];
            let map = tuples(doc.size, f.arity).into_iter().zip(table.iter().copied()).collect();
            n.funcs.insert(f.name.clone(), map);
        }
        for r in sig.relations() {
            n.rels.insert(r.name.clone(), doc.relations[&r.name].iter().cloned().collect());
        }
        n
    }

    fn term(&self, t: &Term, env: &HashMap<&str, usize>) -> usize {
        match t {
            Term::Var(v) => env[v.as_str()],
            Term::Const(c) => self.consts[c],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.funcs[f][&vals]
            }
        }
    }

    fn formula(&self, f: &Formula, env: &HashMap<&str, usize>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(r, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.rels[r].contains(&vals)
            }
            Formula::Eq(a, b) => self.term(a, env) == self.term(b, env),
            Formula::Lt(a, b) => self.term(a, env) < self.term(b, env),
            Formula::Not(g) => !self.formula(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.formula(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.formula(g, env)),
            Formula::Implies(a, b) => !self.formula(a, env) || self.formula(b, env),
            Formula::Iff(a, b) => self.formula(a, env) == self.formula(b, env),
        }
    }

    /// Every assignment of the quantified variables satisfies the matrix.
    pub fn satisfies(&self, phi: &UniversalSentence) -> bool {
        tuples(self.size, phi.q()).iter().all(|vals| {
            let env: HashMap<&str, usize> = phi.vars().iter().map(String::as_str).zip(vals.iter().copied()).collect();
            self.formula(phi.matrix(), &env)
        })
    }
}

/// Walks every interpretation of `sig` at `size`, in no particular order,
/// until `visit` returns true. Panics past `limit` interpretations.
pub fn any_structure(sig: &Signature, size: usize, limit: u128, mut visit: impl FnMut(&Naive) -> bool) -> bool {
    if size == 0 && !sig.constants().is_empty() {
        return false;
    }
    // one digit per cell: constants, then function entries, then relation bits
    let mut radix = Vec::new();
    let mut cells = Vec::new();
    for c in sig.constants() {
        radix.push(size);
        cells.push((0u8, c.clone(), vec![]));
    }
    for f in sig.functions() {
        for t in tuples(size, f.arity) {
            radix.push(size);
            cells.push((1, f.name.clone(), t));
        }
    }
    for r in sig.relations() {
        for t in tuples(size, r.arity) {
            radix.push(2);
            cells.push((2, r.name.clone(), t));
        }
    }
    let total: u128 = radix.iter().map(|&r| r as u128).product();
    assert!(total <= limit, "{total} interpretations exceed the limit");
    let mut digits = vec![0usize; radix.len()];
    loop {
        let mut s = Naive { size, ..Naive::default() };
        for f in sig.functions() {
            s.funcs.insert(f.name.clone(), HashMap::new());
        }
        for r in sig.relations() {
            s.rels.insert(r.name.clone(), HashSet::new());
        }
        for ((kind, name, t), &d) in cells.iter().zip(&digits) {
            match kind {
                0 => {
                    s.consts.insert(name.clone(), d);
                }
                1 => {
                    s.funcs.get_mut(name).unwrap().insert(t.clone(), d);
                }
                _ => {
                    if d == 1 {
                        s.rels.get_mut(name).unwrap().insert(t.clone());
                    }
                }
            }
        }
        if visit(&s) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return false;
            }
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

pub fn naive_has_model(phi: &UniversalSentence, size: usize) -> bool {
    any_structure(phi.signature(), size, 1 << 24, |s| s.satisfies(phi))
}

pub fn naive_satisfies(doc: &StructureDocument, phi: &UniversalSentence) -> bool {
    Naive::from_document(doc, phi.signature()).satisfies(phi)
}

/// Closure of `start` by direct iteration over the function tables, with
/// the least `n >= 1` after which nothing new appears.
pub fn naive_closure(doc: &StructureDocument, sig: &Signature, start: &[usize]) -> (Vec<usize>, usize) {
    let n = Naive::from_document(doc, sig);
    let step = |set: &BTreeSet<usize>| {
        let mut out = set.clone();
        out.extend(n.consts.values().copied());
        for f in sig.functions() {
            for t in tuples(n.size, f.arity) {
                if t.iter().all(|e| set.contains(e)) {
                    out.insert(n.funcs[&f.name][&t]);
                }
            }
        }
        out
    };
    let mut current = step(&start.iter().copied().collect());
    let mut depth = 1;
    loop {
        let next = step(&current);
        if next == current {
            return (current.into_iter().collect(), depth);
        }
        current = next;
        depth += 1;
    }
}

/// The substructure on `set`, renumbered in increasing order.
pub fn naive_substructure(doc: &StructureDocument, sig: &Signature, set: &[usize]) -> Naive {
    let n = Naive::from_document(doc, sig);
    let new_index = |e: usize| set.iter().position(|&x| x == e).expect("set is closed");
    let mut out = Naive { size: set.len(), ..Naive::default() };
    for (c, &v) in &n.consts {
        out.consts.insert(c.clone(), new_index(v));
    }
    for f in sig.functions() {
        let map = tuples(set.len(), f.arity)
            .into_iter()
            .map(|t| {
                let old: Vec<usize> = t.iter().map(|&i| set[i]).collect();
                (t, new_index(n.funcs[&f.name][&old]))
            })
            .collect();
        out.funcs.insert(f.name.clone(), map);
    }
    for r in sig.relations() {
        let rel = tuples(set.len(), r.arity)
            .into_iter()
            .filter(|t| n.rels[&r.name].contains(&t.iter().map(|&i| set[i]).collect::<Vec<_>>()))
            .collect();
        out.rels.insert(r.name.clone(), rel);
    }
    out
}
