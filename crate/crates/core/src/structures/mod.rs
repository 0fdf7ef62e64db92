//! Finite structures over `{0, .., m-1}` with `<` the natural order.

mod closure;
pub mod eval;

pub use closure::{closure, closure_step, generated_substructure, ElementSet};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Signature, Term, UniversalSentence};
use eval::{CompiledSentence, Interp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("symbol `{0}` is missing from the structure or declared differently")]
    SignatureMismatch(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("`{0}` is wider than the evaluator supports")]
    TooWide(String),
    #[error("a structure with constants cannot be empty")]
    EmptyWithConstants,
    #[error("element {element} is outside a structure of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("table for `{name}` has {found} entries, expected {expected}")]
    TableShape { name: String, expected: usize, found: usize },
    #[error("invalid structure document: {0}")]
    Json(String),
}

/// Row-major index of `args` in a table over `size` elements.
pub(crate) fn table_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

pub(crate) fn table_len(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

/// Every `arity`-tuple over `0..size` in row-major order.
pub(crate) fn for_each_tuple(size: usize, arity: usize, mut visit: impl FnMut(&[usize])) {
    if size == 0 && arity > 0 {
        return;
    }
    let mut tuple = vec![0; arity];
    loop {
        visit(&tuple);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < size {
                break;
            }
            tuple[i] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    size: usize,
    signature: Signature,
    functions: Vec<Vec<usize>>,
    relations: Vec<Vec<bool>>,
    constants: Vec<usize>,
}

impl FiniteStructure {
    /// All functions constantly 0, relations empty, constants 0.
    pub fn new(signature: Signature, size: usize) -> Result<Self, StructureError> {
        if size == 0 && !signature.constants().is_empty() {
            return Err(StructureError::EmptyWithConstants);
        }
        let functions = signature
            .functions()
            .iter()
            .map(|f| vec![0; table_len(size, f.arity)])
            .collect();
        let relations = signature
            .relations()
            .iter()
            .map(|r| vec![false; table_len(size, r.arity)])
            .collect();
        let constants = vec![0; signature.constants().len()];
        Ok(FiniteStructure { size, signature, functions, relations, constants })
    }

    /// Build from raw tables indexed like the signature's symbol lists.
    pub fn from_tables(
        signature: Signature,
        size: usize,
        functions: Vec<Vec<usize>>,
        relations: Vec<Vec<bool>>,
        constants: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let mut m = FiniteStructure::new(signature, size)?;
        if functions.len() != m.functions.len()
            || relations.len() != m.relations.len()
            || constants.len() != m.constants.len()
        {
            return Err(StructureError::Json("table count does not match the signature".into()));
        }
        for (i, table) in functions.into_iter().enumerate() {
            let f = &m.signature.functions()[i];
            if table.len() != m.functions[i].len() {
                return Err(StructureError::TableShape {
                    name: f.name.clone(),
                    expected: m.functions[i].len(),
                    found: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(StructureError::OutOfRange { element: bad, size });
            }
            m.functions[i] = table;
        }
        for (i, table) in relations.into_iter().enumerate() {
            if table.len() != m.relations[i].len() {
                return Err(StructureError::TableShape {
                    name: m.signature.relations()[i].name.clone(),
                    expected: m.relations[i].len(),
                    found: table.len(),
                });
            }
            m.relations[i] = table;
        }
        if let Some(&bad) = constants.iter().find(|&&c| c >= size) {
            return Err(StructureError::OutOfRange { element: bad, size });
        }
        m.constants = constants;
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn function_table(&self, f: usize) -> &[usize] {
        &self.functions[f]
    }

    pub fn relation_table(&self, r: usize) -> &[bool] {
        &self.relations[r]
    }

    pub fn constant_values(&self) -> &[usize] {
        &self.constants
    }

    pub fn function_value(&self, f: usize, args: &[usize]) -> usize {
        self.functions[f][table_index(self.size, args)]
    }

    pub fn relation_holds(&self, r: usize, args: &[usize]) -> bool {
        self.relations[r][table_index(self.size, args)]
    }

    pub fn constant_value(&self, c: usize) -> usize {
        self.constants[c]
    }

    pub fn set_function(&mut self, f: usize, args: &[usize], value: usize) {
        assert!(value < self.size, "value {value} out of range");
        let idx = table_index(self.size, args);
        self.functions[f][idx] = value;
    }

    pub fn set_relation(&mut self, r: usize, args: &[usize], value: bool) {
        let idx = table_index(self.size, args);
        self.relations[r][idx] = value;
    }

    pub fn set_constant(&mut self, c: usize, value: usize) {
        assert!(value < self.size, "value {value} out of range");
        self.constants[c] = value;
    }

    /// Elements `e` with `R(e)` for a unary relation.
    pub fn unary_extension(&self, r: usize) -> Vec<usize> {
        (0..self.size).filter(|&e| self.relations[r][e]).collect()
    }

    /// Serialize as `{size, functions, relations, constants}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.document()).expect("structure documents always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("structure documents always serialize")
    }

    pub fn document(&self) -> StructureDocument {
        let sig = &self.signature;
        let functions = sig
            .functions()
            .iter()
            .zip(&self.functions)
            .map(|(f, t)| (f.name.clone(), t.clone()))
            .collect();
        let relations = sig
            .relations()
            .iter()
            .zip(&self.relations)
            .map(|(r, t)| {
                let mut tuples = Vec::new();
                for_each_tuple(self.size, r.arity, |args| {
                    if t[table_index(self.size, args)] {
                        tuples.push(args.to_vec());
                    }
                });
                (r.name.clone(), tuples)
            })
            .collect();
        let constants = sig
            .constants()
            .iter()
            .zip(&self.constants)
            .map(|(c, v)| (c.clone(), *v))
            .collect();
        StructureDocument { size: self.size, functions, relations, constants }
    }

    /// Parse a structure document against a signature naming every symbol.
    pub fn from_json(text: &str, signature: &Signature) -> Result<Self, StructureError> {
        let doc: StructureDocument = serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        Self::from_document(&doc, signature)
    }

    pub fn from_document(doc: &StructureDocument, signature: &Signature) -> Result<Self, StructureError> {
        let size = doc.size;
        let known: BTreeSet<&str> = signature
            .functions()
            .iter()
            .map(|s| s.name.as_str())
            .chain(signature.relations().iter().map(|s| s.name.as_str()))
            .chain(signature.constants().iter().map(String::as_str))
            .collect();
        let mentioned = doc.functions.keys().chain(doc.relations.keys()).chain(doc.constants.keys());
        for name in mentioned {
            if !known.contains(name.as_str()) {
                return Err(StructureError::SignatureMismatch(name.clone()));
            }
        }
        let mut functions = Vec::new();
        for f in signature.functions() {
            let table = doc
                .functions
                .get(&f.name)
                .ok_or_else(|| StructureError::SignatureMismatch(f.name.clone()))?;
            functions.push(table.clone());
        }
        let mut relations = Vec::new();
        for r in signature.relations() {
            let tuples = doc.relations.get(&r.name).map(Vec::as_slice).unwrap_or(&[]);
            let mut table = vec![false; table_len(size, r.arity)];
            for t in tuples {
                if t.len() != r.arity {
                    return Err(StructureError::TableShape {
                        name: r.name.clone(),
                        expected: r.arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&e| e >= size) {
                    return Err(StructureError::OutOfRange { element: bad, size });
                }
                table[table_index(size, t)] = true;
            }
            relations.push(table);
        }
        let mut constants = Vec::new();
        for c in signature.constants() {
            constants.push(*doc.constants.get(c).ok_or_else(|| StructureError::SignatureMismatch(c.clone()))?);
        }
        FiniteStructure::from_tables(signature.clone(), size, functions, relations, constants)
    }

    /// Same universe and tables restricted to the symbols of `sig`.
    pub fn reduct(&self, sig: &Signature) -> Result<Self, StructureError> {
        Self::from_document(&self.document().restricted(sig), sig)
    }
}

/// The serialized form of a [`FiniteStructure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDocument {
    pub size: usize,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub constants: BTreeMap<String, usize>,
}

impl StructureDocument {
    fn restricted(&self, sig: &Signature) -> StructureDocument {
        let keep = |name: &String| sig.lookup(name).is_some();
        StructureDocument {
            size: self.size,
            functions: self.functions.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            relations: self.relations.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
            constants: self.constants.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

impl Interp for FiniteStructure {
    fn size(&self) -> usize {
        self.size
    }

    fn constant(&self, c: usize) -> Option<usize> {
        Some(self.constants[c])
    }

    fn apply(&self, f: usize, args: &[usize]) -> Option<usize> {
        Some(self.functions[f][table_index(self.size, args)])
    }

    fn holds(&self, r: usize, args: &[usize]) -> Option<bool> {
        Some(self.relations[r][table_index(self.size, args)])
    }
}

/// Value of `t` in `m` under a named assignment.
pub fn eval_term(m: &FiniteStructure, assignment: &BTreeMap<String, usize>, t: &Term) -> Result<usize, StructureError> {
    let sig = m.signature();
    match t {
        Term::Var(v) => assignment
            .get(v)
            .copied()
            .ok_or_else(|| StructureError::UnboundVariable(v.clone())),
        Term::Const(c) => sig
            .constant_index(c)
            .map(|i| m.constant_value(i))
            .ok_or_else(|| StructureError::SignatureMismatch(c.clone())),
        Term::App(f, args) => {
            let idx = sig.function_index(f).ok_or_else(|| StructureError::SignatureMismatch(f.clone()))?;
            if sig.functions()[idx].arity != args.len() {
                return Err(StructureError::SignatureMismatch(f.clone()));
            }
            let vals = args.iter().map(|a| eval_term(m, assignment, a)).collect::<Result<Vec<_>, _>>()?;
            Ok(m.function_value(idx, &vals))
        }
    }
}

/// Whether the matrix of `phi` holds under every assignment into `m`.
pub fn satisfies(m: &FiniteStructure, phi: &UniversalSentence) -> Result<bool, StructureError> {
    Ok(CompiledSentence::new(phi, m.signature())?.holds_in(m))
}

/// A falsifying assignment of `phi`'s variables, if any.
pub fn find_violation(m: &FiniteStructure, phi: &UniversalSentence) -> Result<Option<BTreeMap<String, usize>>, StructureError> {
    let compiled = CompiledSentence::new(phi, m.signature())?;
    Ok(compiled.find_violation(m).map(|env| compiled.named_assignment(&env)))
}
