//! Variable counts of bounded-complexity terms and the indiscernible count
//! `max{3v, v' + v, q v'}`.

use serde::Serialize;

use super::ast::{Signature, UniversalSentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TermMetrics {
    /// Largest number of distinct variables in a term with at least one and
    /// at most `n + 1` function applications (0 without function symbols).
    pub v: usize,
    /// Largest number of distinct variables in an atomic formula whose
    /// arguments are terms of complexity at most `n + 1`.
    pub v_prime: usize,
}

/// Largest variable count of a term with between 1 and `depth` applications,
/// or 0 if no such term exists.
pub fn max_term_vars(sig: &Signature, depth: usize) -> usize {
    let widest = sig.max_function_arity();
    if widest == 0 || depth == 0 {
        return 0;
    }
    // a variable has one variable; each level multiplies by the widest arity
    (0..depth).fold(1usize, |acc, _| acc.saturating_mul(widest).max(acc))
}

pub fn term_metrics(phi: &UniversalSentence, n: usize) -> TermMetrics {
    let sig = phi.signature();
    let v = max_term_vars(sig, n + 1);
    let per_arg = v.max(1);
    // `=` and `<` are binary and always present
    let widest_rel = sig.relations().iter().map(|r| r.arity).chain([2]).max().unwrap_or(2);
    TermMetrics { v, v_prime: widest_rel.saturating_mul(per_arg) }
}

/// `max{3v, v' + v, q v'}` for the metrics at closure bound `n`.
pub fn compute_n(phi: &UniversalSentence, n: usize) -> usize {
    let TermMetrics { v, v_prime } = term_metrics(phi, n);
    let q = phi.q();
    (3 * v).max(v_prime + v).max(q * v_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    #[test]
    fn constants_and_relations_only() {
        let s = parse_sentence("rel R/3\nconst a\nforall x . R(x,x,a)").unwrap();
        for n in 1..4 {
            assert_eq!(term_metrics(&s, n), TermMetrics { v: 0, v_prime: 3 });
        }
    }

    #[test]
    fn wide_function_complexity_one() {
        let s = parse_sentence("fn f/4\nforall x . f(x,x,x,x) = x").unwrap();
        assert_eq!(max_term_vars(s.signature(), 1), 4);
        assert_eq!(max_term_vars(s.signature(), 2), 16);
        assert_eq!(term_metrics(&s, 1).v, 16);
    }

    #[test]
    fn equality_only() {
        let s = parse_sentence("forall x y . x = y").unwrap();
        assert_eq!(term_metrics(&s, 1), TermMetrics { v: 0, v_prime: 2 });
        assert_eq!(compute_n(&s, 1), 4);
    }

    #[test]
    fn vacuous_quantifier_prefix() {
        let s = parse_sentence("fn i/1\nforall . true").unwrap();
        assert_eq!(term_metrics(&s, 1), TermMetrics { v: 1, v_prime: 2 });
        assert_eq!(compute_n(&s, 1), 3);
    }
}
