//! Index-resolved sentences and a guard-pruning clause checker that works on
//! total as well as partially specified interpretations.

use std::collections::BTreeMap;

use crate::logic::{Formula, Signature, Term, UniversalSentence};

use super::StructureError;

/// Widest function or relation the evaluator accepts.
pub const MAX_ARITY: usize = 16;

/// Read access to a (possibly partial) interpretation. `None` means
/// "not decided yet" and is propagated with Kleene semantics.
pub trait Interp {
    fn size(&self) -> usize;
    fn constant(&self, c: usize) -> Option<usize>;
    fn apply(&self, f: usize, args: &[usize]) -> Option<usize>;
    fn holds(&self, r: usize, args: &[usize]) -> Option<bool>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CTerm {
    Var(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CFormula {
    True,
    False,
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Lt(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Vec<CFormula>),
    Or(Vec<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
}

impl CTerm {
    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            CTerm::Var(v) => out.push(*v),
            CTerm::Const(_) => {}
            CTerm::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub fn eval<I: Interp + ?Sized>(&self, m: &I, env: &[usize]) -> Option<usize> {
        match self {
            CTerm::Var(v) => Some(env[*v]),
            CTerm::Const(c) => m.constant(*c),
            CTerm::App(f, args) => {
                let mut buf = [0usize; MAX_ARITY];
                for (slot, a) in buf.iter_mut().zip(args) {
                    *slot = a.eval(m, env)?;
                }
                m.apply(*f, &buf[..args.len()])
            }
        }
    }
}

impl CFormula {
    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            CFormula::True | CFormula::False => {}
            CFormula::Rel(_, args) => args.iter().for_each(|a| a.vars(out)),
            CFormula::Eq(a, b) | CFormula::Lt(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            CFormula::Not(g) => g.vars(out),
            CFormula::And(gs) | CFormula::Or(gs) => gs.iter().for_each(|g| g.vars(out)),
            CFormula::Implies(a, b) | CFormula::Iff(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        let mut vs = Vec::new();
        self.vars(&mut vs);
        vs.into_iter().max()
    }

    /// Kleene three-valued evaluation.
    pub fn eval<I: Interp + ?Sized>(&self, m: &I, env: &[usize]) -> Option<bool> {
        match self {
            CFormula::True => Some(true),
            CFormula::False => Some(false),
            CFormula::Rel(r, args) => {
                let mut buf = [0usize; MAX_ARITY];
                for (slot, a) in buf.iter_mut().zip(args) {
                    *slot = a.eval(m, env)?;
                }
                m.holds(*r, &buf[..args.len()])
            }
            CFormula::Eq(a, b) => Some(a.eval(m, env)? == b.eval(m, env)?),
            CFormula::Lt(a, b) => Some(a.eval(m, env)? < b.eval(m, env)?),
            CFormula::Not(g) => g.eval(m, env).map(|b| !b),
            CFormula::And(gs) => {
                let mut unknown = false;
                for g in gs {
                    match g.eval(m, env) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            CFormula::Or(gs) => {
                let mut unknown = false;
                for g in gs {
                    match g.eval(m, env) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            CFormula::Implies(a, b) => match a.eval(m, env) {
                Some(false) => Some(true),
                Some(true) => b.eval(m, env),
                None => match b.eval(m, env) {
                    Some(true) => Some(true),
                    _ => None,
                },
            },
            CFormula::Iff(a, b) => Some(a.eval(m, env)? == b.eval(m, env)?),
        }
    }
}

fn compile_term(sig: &Signature, vars: &[String], t: &Term) -> Result<CTerm, StructureError> {
    Ok(match t {
        Term::Var(v) => CTerm::Var(
            vars.iter()
                .position(|x| x == v)
                .ok_or_else(|| StructureError::UnboundVariable(v.clone()))?,
        ),
        Term::Const(c) => CTerm::Const(
            sig.constant_index(c)
                .ok_or_else(|| StructureError::SignatureMismatch(c.clone()))?,
        ),
        Term::App(f, args) => {
            let idx = sig
                .function_index(f)
                .ok_or_else(|| StructureError::SignatureMismatch(f.clone()))?;
            if args.len() > MAX_ARITY {
                return Err(StructureError::TooWide(f.clone()));
            }
            CTerm::App(idx, args.iter().map(|a| compile_term(sig, vars, a)).collect::<Result<_, _>>()?)
        }
    })
}

pub fn compile_formula(sig: &Signature, vars: &[String], f: &Formula) -> Result<CFormula, StructureError> {
    let rec = |g: &Formula| compile_formula(sig, vars, g);
    Ok(match f {
        Formula::True => CFormula::True,
        Formula::False => CFormula::False,
        Formula::Rel(r, args) => {
            let idx = sig
                .relation_index(r)
                .ok_or_else(|| StructureError::SignatureMismatch(r.clone()))?;
            if args.len() > MAX_ARITY {
                return Err(StructureError::TooWide(r.clone()));
            }
            CFormula::Rel(idx, args.iter().map(|a| compile_term(sig, vars, a)).collect::<Result<_, _>>()?)
        }
        Formula::Eq(a, b) => CFormula::Eq(compile_term(sig, vars, a)?, compile_term(sig, vars, b)?),
        Formula::Lt(a, b) => CFormula::Lt(compile_term(sig, vars, a)?, compile_term(sig, vars, b)?),
        Formula::Not(g) => CFormula::Not(Box::new(rec(g)?)),
        Formula::And(gs) => CFormula::And(gs.iter().map(rec).collect::<Result<_, _>>()?),
        Formula::Or(gs) => CFormula::Or(gs.iter().map(rec).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => CFormula::Implies(Box::new(rec(a)?), Box::new(rec(b)?)),
        Formula::Iff(a, b) => CFormula::Iff(Box::new(rec(a)?), Box::new(rec(b)?)),
    })
}

/// One top-level conjunct of the matrix, split into guard literals (the
/// antecedents of an implication chain) and a body.
#[derive(Debug, Clone)]
struct Clause {
    /// Variables the clause mentions, in quantifier order.
    vars: Vec<usize>,
    /// Guards indexed by the number of bound clause variables they need.
    guards: Vec<Vec<CFormula>>,
    body: CFormula,
}

impl Clause {
    /// Split `formula` under `guards` into clauses, distributing guards over
    /// conjunctions: `G -> (A & B)` becomes `G -> A` and `G -> B`.
    fn split(formula: CFormula, guards: &mut Vec<CFormula>, out: &mut Vec<Clause>) {
        match formula {
            CFormula::And(parts) => {
                for p in parts {
                    Clause::split(p, guards, out);
                }
            }
            CFormula::Implies(a, b) => {
                let before = guards.len();
                match *a {
                    CFormula::And(parts) => guards.extend(parts),
                    other => guards.push(other),
                }
                Clause::split(*b, guards, out);
                guards.truncate(before);
            }
            CFormula::True => {}
            body => out.push(Clause::build(guards.clone(), body)),
        }
    }

    fn build(guard_list: Vec<CFormula>, body: CFormula) -> Clause {
        let mut vars = Vec::new();
        body.vars(&mut vars);
        guard_list.iter().for_each(|g| g.vars(&mut vars));
        vars.sort_unstable();
        vars.dedup();
        let mut guards = vec![Vec::new(); vars.len() + 1];
        for g in guard_list {
            let level = match g.max_var() {
                None => 0,
                Some(v) => vars.iter().position(|x| *x == v).unwrap() + 1,
            };
            guards[level].push(g);
        }
        Clause { vars, guards, body }
    }

    fn guards_fail<I: Interp + ?Sized>(&self, level: usize, m: &I, env: &[usize]) -> bool {
        self.guards[level].iter().any(|g| g.eval(m, env) == Some(false))
    }

    fn search<I: Interp + ?Sized>(&self, level: usize, m: &I, env: &mut Vec<usize>) -> bool {
        if level == self.vars.len() {
            // a guard that is still undecided leaves the implication undecided
            return self.body.eval(m, env) == Some(false)
                && self.guards.iter().flatten().all(|g| g.eval(m, env) == Some(true));
        }
        let v = self.vars[level];
        for e in 0..m.size() {
            env[v] = e;
            if self.guards_fail(level + 1, m, env) {
                continue;
            }
            if self.search(level + 1, m, env) {
                return true;
            }
        }
        false
    }

    /// Looks for an assignment on which the clause is definitely false.
    fn violation<I: Interp + ?Sized>(&self, m: &I, env: &mut Vec<usize>) -> bool {
        if self.guards_fail(0, m, env) {
            return false;
        }
        self.search(0, m, env)
    }
}

/// A sentence resolved against a concrete signature.
#[derive(Debug, Clone)]
pub struct CompiledSentence {
    q: usize,
    vars: Vec<String>,
    clauses: Vec<Clause>,
}

impl CompiledSentence {
    /// Resolve `phi` against `sig`, which must contain every symbol of `phi`
    /// with the same declaration.
    pub fn new(phi: &UniversalSentence, sig: &Signature) -> Result<Self, StructureError> {
        if !phi.signature().is_subsignature_of(sig) {
            let missing = first_mismatch(phi.signature(), sig);
            return Err(StructureError::SignatureMismatch(missing));
        }
        let matrix = compile_formula(sig, phi.vars(), phi.matrix())?;
        let mut clauses = Vec::new();
        Clause::split(matrix, &mut Vec::new(), &mut clauses);
        Ok(CompiledSentence {
            q: phi.q(),
            vars: phi.vars().to_vec(),
            clauses,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// First assignment (clause by clause) making the matrix definitely false.
    /// Unknown values never count as violations.
    pub fn find_violation<I: Interp + ?Sized>(&self, m: &I) -> Option<Vec<usize>> {
        let mut env = vec![0; self.q];
        for c in &self.clauses {
            if c.violation(m, &mut env) {
                // unmentioned variables are reported as 0
                let mut out = vec![0; self.q];
                for &v in &c.vars {
                    out[v] = env[v];
                }
                return Some(out);
            }
        }
        None
    }

    pub fn holds_in<I: Interp + ?Sized>(&self, m: &I) -> bool {
        self.find_violation(m).is_none()
    }

    pub fn named_assignment(&self, env: &[usize]) -> BTreeMap<String, usize> {
        self.vars.iter().cloned().zip(env.iter().copied()).collect()
    }
}

fn first_mismatch(small: &Signature, big: &Signature) -> String {
    use crate::logic::SymbolKind;
    for f in small.functions() {
        if big.lookup(&f.name) != Some(SymbolKind::Function(f.arity)) {
            return f.name.clone();
        }
    }
    for r in small.relations() {
        if big.lookup(&r.name) != Some(SymbolKind::Relation(r.arity)) {
            return r.name.clone();
        }
    }
    for c in small.constants() {
        if big.lookup(c) != Some(SymbolKind::Constant) {
            return c.clone();
        }
    }
    String::new()
}
