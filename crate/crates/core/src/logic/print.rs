use std::fmt::{self, Write};

use super::ast::{Formula, UniversalSentence};

/// Render a sentence in `.lsq` syntax. The output re-parses to the same AST.
pub fn print_sentence(s: &UniversalSentence) -> String {
    let mut out = String::new();
    let sig = s.signature();
    for f in sig.functions() {
        let _ = writeln!(out, "fn {}/{}", f.name, f.arity);
    }
    for r in sig.relations() {
        let _ = writeln!(out, "rel {}/{}", r.name, r.arity);
    }
    for c in sig.constants() {
        let _ = writeln!(out, "const {c}");
    }
    if let Some(n) = s.declared_steps() {
        let _ = writeln!(out, "steps {n}");
    }
    out.push_str("forall");
    for v in s.vars() {
        out.push(' ');
        out.push_str(v);
    }
    out.push_str(" .\n  ");
    out.push_str(&s.matrix().to_string());
    out.push('\n');
    out
}

fn is_compound(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..)
    )
}

fn operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if is_compound(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(out, "true"),
            Formula::False => write!(out, "false"),
            Formula::Rel(r, args) if args.is_empty() => write!(out, "{r}"),
            Formula::Rel(r, args) => {
                write!(out, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{a}")?;
                }
                write!(out, ")")
            }
            Formula::Eq(a, b) => write!(out, "{a} = {b}"),
            Formula::Lt(a, b) => write!(out, "{a} < {b}"),
            Formula::Not(g) => {
                write!(out, "!")?;
                // atoms like `x = y` need parentheses under negation
                if matches!(**g, Formula::Eq(..) | Formula::Lt(..)) || is_compound(g) {
                    write!(out, "({g})")
                } else {
                    write!(out, "{g}")
                }
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let sep = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(out, "{sep}")?;
                    }
                    operand(out, g)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                operand(out, a)?;
                write!(out, " -> ")?;
                operand(out, b)
            }
            Formula::Iff(a, b) => {
                operand(out, a)?;
                write!(out, " <-> ")?;
                operand(out, b)
            }
        }
    }
}
