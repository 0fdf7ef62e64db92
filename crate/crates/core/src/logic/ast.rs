//! Syntax trees for universal sentences over finite signatures.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// Names that can never be declared by a user: the built-in equality and order.
pub const RESERVED: [&str; 2] = ["=", "<"];

/// A function or relation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

/// A finite signature. Equality and the order `<` are always present and are
/// not listed in `relations`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    functions: Vec<Symbol>,
    relations: Vec<Symbol>,
    constants: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Function(usize),
    Relation(usize),
    Constant,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    /// User relations; `=` and `<` are implicit.
    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty() && self.relations.is_empty() && self.constants.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolKind> {
        if let Some(f) = self.functions.iter().find(|s| s.name == name) {
            return Some(SymbolKind::Function(f.arity));
        }
        if let Some(r) = self.relations.iter().find(|s| s.name == name) {
            return Some(SymbolKind::Relation(r.arity));
        }
        if self.constants.iter().any(|c| c == name) {
            return Some(SymbolKind::Constant);
        }
        None
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|s| s.name == name)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|s| s.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    fn check_fresh(&self, name: &str) -> Result<(), LogicError> {
        if RESERVED.contains(&name) {
            return Err(LogicError::Reserved(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(LogicError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<(), LogicError> {
        let name = name.into();
        self.check_fresh(&name)?;
        if arity == 0 {
            return Err(LogicError::ZeroArityFunction(name));
        }
        self.functions.push(Symbol { name, arity });
        Ok(())
    }

    /// Relations may be 0-ary (propositional flags such as the union selector).
    pub fn add_relation(&mut self, name: impl Into<String>, arity: usize) -> Result<(), LogicError> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.relations.push(Symbol { name, arity });
        Ok(())
    }

    pub fn add_constant(&mut self, name: impl Into<String>) -> Result<(), LogicError> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.constants.push(name);
        Ok(())
    }

    /// Every symbol of `self` is declared identically in `other`.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.functions
            .iter()
            .all(|s| other.lookup(&s.name) == Some(SymbolKind::Function(s.arity)))
            && self
                .relations
                .iter()
                .all(|s| other.lookup(&s.name) == Some(SymbolKind::Relation(s.arity)))
            && self
                .constants
                .iter()
                .all(|c| other.lookup(c) == Some(SymbolKind::Constant))
    }

    /// Union of two signatures; shared names must have identical declarations.
    pub fn merge(&self, other: &Signature) -> Result<Signature, LogicError> {
        let mut out = self.clone();
        for f in &other.functions {
            match self.lookup(&f.name) {
                None => out.add_function(f.name.clone(), f.arity)?,
                Some(SymbolKind::Function(a)) if a == f.arity => {}
                Some(_) => return Err(LogicError::Conflict(f.name.clone())),
            }
        }
        for r in &other.relations {
            match self.lookup(&r.name) {
                None => out.add_relation(r.name.clone(), r.arity)?,
                Some(SymbolKind::Relation(a)) if a == r.arity => {}
                Some(_) => return Err(LogicError::Conflict(r.name.clone())),
            }
        }
        for c in &other.constants {
            match self.lookup(c) {
                None => out.add_constant(c.clone())?,
                Some(SymbolKind::Constant) => {}
                Some(_) => return Err(LogicError::Conflict(c.clone())),
            }
        }
        Ok(out)
    }

    pub fn max_function_arity(&self) -> usize {
        self.functions.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    /// Number of function applications along the deepest path.
    pub fn complexity(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::complexity).max().unwrap_or(0),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn rename(&self, map: &dyn Fn(&Term) -> Option<String>) -> Term {
        match self {
            Term::Var(_) | Term::Const(_) => match map(self) {
                Some(n) if matches!(self, Term::Var(_)) => Term::Var(n),
                Some(n) => Term::Const(n),
                None => self.clone(),
            },
            Term::App(f, args) => {
                let name = map(self).unwrap_or_else(|| f.clone());
                Term::App(name, args.iter().map(|a| a.rename(map)).collect())
            }
        }
    }
}

/// Quantifier-free formulas. `t1 <= t2` is parsed as `t1 < t2 | t1 = t2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Lt(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Or(vec![Formula::Lt(a.clone(), b.clone()), Formula::Eq(a, b)])
    }

    /// Conjunction that collapses the 0- and 1-element cases.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or_all(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out.into_iter().map(str::to_string).collect()
    }

    /// Visit every term occurring as an argument of an atom.
    pub fn for_each_atom_term<'a>(&'a self, visit: &mut dyn FnMut(&'a Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => args.iter().for_each(|t| visit(t)),
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                visit(a);
                visit(b);
            }
            Formula::Not(f) => f.for_each_atom_term(visit),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.for_each_atom_term(visit)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_atom_term(visit);
                b.for_each_atom_term(visit);
            }
        }
    }

    /// Rename symbols (relations, functions, constants) and variables.
    /// `sym` maps symbol names, `var` maps variable names; `None` keeps the name.
    pub fn rename(
        &self,
        sym: &dyn Fn(&str) -> Option<String>,
        var: &dyn Fn(&str) -> Option<String>,
    ) -> Formula {
        let term_map = |t: &Term| -> Option<String> {
            match t {
                Term::Var(v) => var(v),
                Term::Const(c) => sym(c),
                Term::App(f, _) => sym(f),
            }
        };
        let rt = |t: &Term| t.rename(&term_map);
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Rel(r, args) => Formula::Rel(
                sym(r).unwrap_or_else(|| r.clone()),
                args.iter().map(rt).collect(),
            ),
            Formula::Eq(a, b) => Formula::Eq(rt(a), rt(b)),
            Formula::Lt(a, b) => Formula::Lt(rt(a), rt(b)),
            Formula::Not(f) => Formula::not(f.rename(sym, var)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename(sym, var)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename(sym, var)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename(sym, var), b.rename(sym, var)),
            Formula::Iff(a, b) => Formula::iff(a.rename(sym, var), b.rename(sym, var)),
        }
    }
}

/// `forall x1 .. xq . matrix` over a signature, optionally carrying the
/// claimed closure step bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniversalSentence {
    signature: Signature,
    vars: Vec<String>,
    matrix: Formula,
    declared_steps: Option<usize>,
}

impl UniversalSentence {
    /// Checks scoping and arities of the matrix against the signature.
    pub fn new(
        signature: Signature,
        vars: Vec<String>,
        matrix: Formula,
        declared_steps: Option<usize>,
    ) -> Result<Self, LogicError> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.as_str()) {
                return Err(LogicError::Duplicate(v.clone()));
            }
            if signature.lookup(v).is_some() {
                return Err(LogicError::Conflict(v.clone()));
            }
        }
        if declared_steps == Some(0) {
            return Err(LogicError::ZeroSteps);
        }
        check_formula(&signature, &seen, &matrix)?;
        Ok(UniversalSentence { signature, vars, matrix, declared_steps })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of universally quantified variables.
    pub fn q(&self) -> usize {
        self.vars.len()
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn declared_steps(&self) -> Option<usize> {
        self.declared_steps
    }

    pub fn with_declared_steps(mut self, steps: Option<usize>) -> Result<Self, LogicError> {
        if steps == Some(0) {
            return Err(LogicError::ZeroSteps);
        }
        self.declared_steps = steps;
        Ok(self)
    }
}

fn check_term(sig: &Signature, vars: &BTreeSet<&str>, t: &Term) -> Result<(), LogicError> {
    match t {
        Term::Var(v) => {
            if vars.contains(v.as_str()) {
                Ok(())
            } else {
                Err(LogicError::Undeclared(v.clone()))
            }
        }
        Term::Const(c) => match sig.lookup(c) {
            Some(SymbolKind::Constant) => Ok(()),
            Some(_) => Err(LogicError::KindMismatch(c.clone())),
            None => Err(LogicError::Undeclared(c.clone())),
        },
        Term::App(f, args) => {
            match sig.lookup(f) {
                Some(SymbolKind::Function(a)) if a == args.len() => {}
                Some(SymbolKind::Function(a)) => {
                    return Err(LogicError::Arity { name: f.clone(), expected: a, found: args.len() })
                }
                Some(_) => return Err(LogicError::KindMismatch(f.clone())),
                None => return Err(LogicError::Undeclared(f.clone())),
            }
            args.iter().try_for_each(|a| check_term(sig, vars, a))
        }
    }
}

fn check_formula(sig: &Signature, vars: &BTreeSet<&str>, f: &Formula) -> Result<(), LogicError> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Rel(r, args) => {
            match sig.lookup(r) {
                Some(SymbolKind::Relation(a)) if a == args.len() => {}
                Some(SymbolKind::Relation(a)) => {
                    return Err(LogicError::Arity { name: r.clone(), expected: a, found: args.len() })
                }
                Some(_) => return Err(LogicError::KindMismatch(r.clone())),
                None => return Err(LogicError::Undeclared(r.clone())),
            }
            args.iter().try_for_each(|a| check_term(sig, vars, a))
        }
        Formula::Eq(a, b) | Formula::Lt(a, b) => {
            check_term(sig, vars, a)?;
            check_term(sig, vars, b)
        }
        Formula::Not(g) => check_formula(sig, vars, g),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|g| check_formula(sig, vars, g)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check_formula(sig, vars, a)?;
            check_formula(sig, vars, b)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
