//! Universal sentences: syntax, the `.lsq` surface language, syntactic
//! metrics and sentence combinators.

mod ast;
mod combine;
mod metrics;
mod parse;
mod print;

pub use ast::{Formula, Signature, Symbol, SymbolKind, Term, UniversalSentence, RESERVED};
pub use combine::{conjoin, union_sentence, UNION_SELECTOR};
pub use metrics::{compute_n, max_term_vars, term_metrics, TermMetrics};
pub use parse::parse_sentence;
pub use print::print_sentence;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("at {line}:{col}: {inner}")]
    Located { line: usize, col: usize, inner: Box<LogicError> },
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("`{0}` is used as the wrong kind of symbol")]
    KindMismatch(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("function `{0}` must have positive arity")]
    ZeroArityFunction(String),
    #[error("conflicting declarations for `{0}`")]
    Conflict(String),
    #[error("declared closure steps must be at least 1")]
    ZeroSteps,
    #[error("name collision after renaming: `{0}`")]
    Collision(String),
}

impl LogicError {
    pub(crate) fn at(self, line: usize, col: usize) -> Self {
        match self {
            e @ (LogicError::Syntax { .. } | LogicError::Located { .. }) => e,
            inner => LogicError::Located { line, col, inner: Box::new(inner) },
        }
    }

    /// The underlying error with any position wrapper removed.
    pub fn kind(&self) -> &LogicError {
        match self {
            LogicError::Located { inner, .. } => inner.kind(),
            e => e,
        }
    }
}
