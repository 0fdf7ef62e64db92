//! Term shapes over positional variables, deduplicated by their values on a
//! list of argument tuples.

use std::collections::HashMap;

use itertools::Itertools;

use crate::logic::Signature;
use crate::structures::FiniteStructure;

use super::StretchError;

/// Largest number of argument combinations tried at one level.
const COMBINATION_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Shape {
    Var(usize),
    Const(usize),
    App(usize, Vec<Shape>),
}

impl Shape {
    pub(crate) fn eval(&self, m: &FiniteStructure, env: &[usize]) -> usize {
        match self {
            Shape::Var(i) => env[*i],
            Shape::Const(c) => m.constant_value(*c),
            Shape::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| a.eval(m, env)).collect();
                m.function_value(*f, &vals)
            }
        }
    }

    pub(crate) fn uses_all(&self, arity: usize) -> bool {
        let mut seen = vec![false; arity];
        self.mark(&mut seen);
        seen.into_iter().all(|s| s)
    }

    fn mark(&self, seen: &mut [bool]) {
        match self {
            Shape::Var(i) => seen[*i] = true,
            Shape::Const(_) => {}
            Shape::App(_, args) => args.iter().for_each(|a| a.mark(seen)),
        }
    }

    pub(crate) fn render(&self, sig: &Signature, var: &dyn Fn(usize) -> String) -> String {
        match self {
            Shape::Var(i) => var(*i),
            Shape::Const(c) => sig.constants()[*c].clone(),
            Shape::App(f, args) => {
                format!("{}({})", sig.functions()[*f].name, args.iter().map(|a| a.render(sig, var)).join(","))
            }
        }
    }
}

/// Terms in `arity` variables with at most `depth` applications, one per
/// distinct value vector over `tuples`.
pub(crate) struct TermTable {
    pub(crate) shapes: Vec<Shape>,
    /// `values[t][j]` is term `t` at `tuples[j]`.
    pub(crate) values: Vec<Vec<usize>>,
}

pub(crate) fn term_table(
    m: &FiniteStructure,
    arity: usize,
    depth: usize,
    tuples: &[Vec<usize>],
) -> Result<TermTable, StretchError> {
    let mut table = TermTable { shapes: Vec::new(), values: Vec::new() };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut add = |table: &mut TermTable, shape: Shape| {
        let vals: Vec<usize> = tuples.iter().map(|t| shape.eval(m, t)).collect();
        if !seen.contains_key(&vals) {
            seen.insert(vals.clone(), table.shapes.len());
            table.shapes.push(shape);
            table.values.push(vals);
        }
    };
    for i in 0..arity {
        add(&mut table, Shape::Var(i));
    }
    for c in 0..m.signature().constants().len() {
        add(&mut table, Shape::Const(c));
    }
    for _ in 0..depth {
        let before = table.shapes.len();
        for (f, sym) in m.signature().functions().iter().enumerate() {
            let combos = before.checked_pow(sym.arity as u32).unwrap_or(usize::MAX);
            if combos > COMBINATION_CAP {
                return Err(StretchError::TooManyTerms { function: sym.name.clone(), combinations: combos });
            }
            for args in (0..sym.arity).map(|_| 0..before).multi_cartesian_product() {
                let shape = Shape::App(f, args.iter().map(|&a| table.shapes[a].clone()).collect());
                add(&mut table, shape);
            }
        }
        if table.shapes.len() == before {
            break;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn mono3_terms_collapse() {
        let fx = catalog::fixture("mono3").unwrap();
        let tuples = vec![vec![1], vec![3], vec![5]];
        let t = term_table(&fx.model, 1, 5, &tuples).unwrap();
        // x and g(x); g(g(x)) = g(x)
        assert_eq!(t.values, vec![vec![1, 3, 5], vec![0, 2, 4]]);
        let sig = fx.model.signature();
        assert_eq!(t.shapes[1].render(sig, &|i| format!("x{i}")), "g(x0)");
        assert!(t.shapes[1].uses_all(1));
    }
}
