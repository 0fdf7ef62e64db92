//! Backtracking over constants, relation bits and function table entries in
//! a fixed order, pruning on ground clause instances that are already false.
//! The order `<` is the natural one and is never searched.

use std::ops::ControlFlow;

use crate::logic::UniversalSentence;
use crate::structures::eval::{CompiledSentence, Interp};
use crate::structures::{table_index, table_len, FiniteStructure};

use super::{SearchOptions, SpectrumError};

#[derive(Debug, Clone, Copy)]
enum Cell {
    Constant(usize),
    Relation(usize, usize),
    Function(usize, usize),
}

struct Partial {
    size: usize,
    constants: Vec<Option<usize>>,
    relations: Vec<Vec<Option<bool>>>,
    functions: Vec<Vec<Option<usize>>>,
}

impl Interp for Partial {
    fn size(&self) -> usize {
        self.size
    }

    fn constant(&self, c: usize) -> Option<usize> {
        self.constants[c]
    }

    fn apply(&self, f: usize, args: &[usize]) -> Option<usize> {
        self.functions[f][table_index(self.size, args)]
    }

    fn holds(&self, r: usize, args: &[usize]) -> Option<bool> {
        self.relations[r][table_index(self.size, args)]
    }
}

/// How an enumeration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    /// Every interpretation was considered.
    Exhausted,
    /// The visitor asked to stop.
    Stopped,
    /// The node budget ran out first.
    BudgetExceeded,
}

pub(crate) struct Search<'a> {
    phi: &'a UniversalSentence,
    compiled: CompiledSentence,
    size: usize,
    cells: Vec<Cell>,
    partial: Partial,
    budget: u64,
    pub(crate) nodes: u64,
}

impl<'a> Search<'a> {
    pub(crate) fn new(phi: &'a UniversalSentence, size: usize, opts: &SearchOptions) -> Result<Self, SpectrumError> {
        let sig = phi.signature();
        if !opts.allow_high_arity {
            if let Some(f) = sig.functions().iter().find(|f| f.arity >= 3) {
                return Err(SpectrumError::HighArity { symbol: f.name.clone(), arity: f.arity });
            }
        }
        let compiled = CompiledSentence::new(phi, sig)?;
        let mut cells = Vec::new();
        cells.extend((0..sig.constants().len()).map(Cell::Constant));
        for (r, rel) in sig.relations().iter().enumerate() {
            cells.extend((0..table_len(size, rel.arity)).map(|i| Cell::Relation(r, i)));
        }
        for (f, fun) in sig.functions().iter().enumerate() {
            cells.extend((0..table_len(size, fun.arity)).map(|i| Cell::Function(f, i)));
        }
        let partial = Partial {
            size,
            constants: vec![None; sig.constants().len()],
            relations: sig.relations().iter().map(|r| vec![None; table_len(size, r.arity)]).collect(),
            functions: sig.functions().iter().map(|f| vec![None; table_len(size, f.arity)]).collect(),
        };
        Ok(Search { phi, compiled, size, cells, partial, budget: opts.budget, nodes: 0 })
    }

    fn domain(&self, cell: Cell) -> usize {
        match cell {
            Cell::Relation(..) => 2,
            _ => self.size,
        }
    }

    fn set(&mut self, cell: Cell, value: Option<usize>) {
        match cell {
            Cell::Constant(c) => self.partial.constants[c] = value,
            Cell::Relation(r, i) => self.partial.relations[r][i] = value.map(|v| v == 1),
            Cell::Function(f, i) => self.partial.functions[f][i] = value,
        }
    }

    fn snapshot(&self) -> FiniteStructure {
        let p = &self.partial;
        FiniteStructure::from_tables(
            self.phi.signature().clone(),
            self.size,
            p.functions.iter().map(|t| t.iter().map(|v| v.unwrap()).collect()).collect(),
            p.relations.iter().map(|t| t.iter().map(|v| v.unwrap()).collect()).collect(),
            p.constants.iter().map(|v| v.unwrap()).collect(),
        )
        .expect("complete assignments are valid structures")
    }

    /// Visit every model of size `size` in lexicographic order of the cell
    /// assignment.
    pub(crate) fn run(&mut self, visit: &mut dyn FnMut(&FiniteStructure) -> ControlFlow<()>) -> Completion {
        if self.size == 0 && !self.phi.signature().constants().is_empty() {
            return Completion::Exhausted;
        }
        if self.compiled.find_violation(&self.partial).is_some() {
            return Completion::Exhausted;
        }
        self.descend(0, visit)
    }

    fn descend(&mut self, depth: usize, visit: &mut dyn FnMut(&FiniteStructure) -> ControlFlow<()>) -> Completion {
        if depth == self.cells.len() {
            let m = self.snapshot();
            return match visit(&m) {
                ControlFlow::Break(()) => Completion::Stopped,
                ControlFlow::Continue(()) => Completion::Exhausted,
            };
        }
        let cell = self.cells[depth];
        for value in 0..self.domain(cell) {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.set(cell, None);
                return Completion::BudgetExceeded;
            }
            self.set(cell, Some(value));
            if self.compiled.find_violation(&self.partial).is_some() {
                continue;
            }
            match self.descend(depth + 1, visit) {
                Completion::Exhausted => {}
                other => {
                    self.set(cell, None);
                    return other;
                }
            }
        }
        self.set(cell, None);
        Completion::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    #[test]
    fn enumerates_all_linear_segment_models() {
        // models of size m: any P containing the last element
        let psi1 = parse_sentence(
            "fn I/1\nrel P/1\nforall y z . (y <= I(y) & (y <= z -> I(y) <= I(z)) & ((y <= z & z <= I(y)) -> I(z) = I(y))) & (I(y) = y <-> P(y))",
        )
        .unwrap();
        for m in 1..=5 {
            let mut count = 0;
            let mut s = Search::new(&psi1, m, &SearchOptions::default()).unwrap();
            let done = s.run(&mut |_| {
                count += 1;
                ControlFlow::Continue(())
            });
            assert_eq!(done, Completion::Exhausted);
            assert_eq!(count, 1 << (m - 1), "size {m}");
        }
    }

    #[test]
    fn budget_is_reported() {
        let phi = parse_sentence("fn f/2\nforall x . f(x,x) = x").unwrap();
        let opts = SearchOptions { budget: 3, ..SearchOptions::default() };
        let mut s = Search::new(&phi, 3, &opts).unwrap();
        assert_eq!(s.run(&mut |_| ControlFlow::Continue(())), Completion::BudgetExceeded);
    }
}
