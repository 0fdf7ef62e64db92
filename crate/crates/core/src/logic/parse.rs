//! Recursive-descent parser for `.lsq` sources.
//!
//! ```text
//! fn i/1
//! rel P/1
//! const a
//! steps 2                      # optional claimed closure bound
//! forall x y in P z . matrix   # `in P` guards the variables before it
//! ```
//!
//! Connectives by increasing binding strength: `<->`, `->` (right
//! associative), `|`, `&`, `!`.

use super::ast::{Formula, Signature, SymbolKind, Term, UniversalSentence};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Eq,
    Lt,
    Le,
    And,
    Or,
    Not,
    Arrow,
    DoubleArrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, LogicError> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (lno, col) = (li + 1, i + 1);
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: lno, col });
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| LogicError::Syntax {
                    line: lno,
                    col,
                    message: format!("number `{text}` out of range"),
                })?;
                push(&mut out, Tok::Num(n));
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::DoubleArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("<=") {
                (Tok::Le, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '/' => Tok::Slash,
                    '=' => Tok::Eq,
                    '<' => Tok::Lt,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '!' => Tok::Not,
                    other => {
                        return Err(LogicError::Syntax {
                            line: lno,
                            col,
                            message: format!("unexpected character `{other}`"),
                        })
                    }
                };
                (t, 1)
            };
            push(&mut out, tok);
            i += len;
        }
    }
    let (line, col) = (src.lines().count().max(1), 1);
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    sig: Signature,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> LogicError {
        let (line, col) = self.here();
        LogicError::Syntax { line, col, message: message.into() }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {:?}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LogicError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {other:?}"))),
        }
    }

    fn number(&mut self) -> Result<usize, LogicError> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            ref other => Err(self.error(format!("expected number, found {other:?}"))),
        }
    }

    fn sentence(&mut self) -> Result<UniversalSentence, LogicError> {
        let mut steps = None;
        loop {
            let (line, col) = self.here();
            match self.peek().clone() {
                Tok::Ident(k) if k == "fn" || k == "rel" => {
                    self.bump();
                    let name = self.ident("symbol name")?;
                    self.expect(Tok::Slash, "`/`")?;
                    let arity = self.number()?;
                    let res = if k == "fn" {
                        self.sig.add_function(name, arity)
                    } else {
                        self.sig.add_relation(name, arity)
                    };
                    res.map_err(|e| e.at(line, col))?;
                }
                Tok::Ident(k) if k == "const" => {
                    self.bump();
                    let name = self.ident("constant name")?;
                    self.sig.add_constant(name).map_err(|e| e.at(line, col))?;
                }
                Tok::Ident(k) if k == "steps" => {
                    self.bump();
                    if steps.is_some() {
                        return Err(LogicError::Syntax { line, col, message: "`steps` given twice".into() });
                    }
                    let n = self.number()?;
                    if n == 0 {
                        return Err(LogicError::ZeroSteps.at(line, col));
                    }
                    steps = Some(n);
                }
                Tok::Ident(k) if k == "forall" => break,
                other => return Err(self.error(format!("expected declaration or `forall`, found {other:?}"))),
            }
        }
        self.bump();
        // variables, with optional `in R` guards applying to the pending group
        let mut guards = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        loop {
            let (line, col) = self.here();
            match self.peek().clone() {
                Tok::Dot => {
                    self.bump();
                    break;
                }
                Tok::Ident(k) if k == "in" => {
                    self.bump();
                    let rel = self.ident("guard relation")?;
                    match self.sig.lookup(&rel) {
                        Some(SymbolKind::Relation(1)) => {}
                        Some(SymbolKind::Relation(a)) => {
                            return Err(LogicError::Arity { name: rel, expected: a, found: 1 }.at(line, col))
                        }
                        Some(_) => return Err(LogicError::KindMismatch(rel).at(line, col)),
                        None => return Err(LogicError::Undeclared(rel).at(line, col)),
                    }
                    if pending.is_empty() {
                        return Err(LogicError::Syntax { line, col, message: "`in` without variables".into() });
                    }
                    for v in pending.drain(..) {
                        guards.push(Formula::Rel(rel.clone(), vec![Term::Var(v)]));
                    }
                }
                Tok::Ident(v) => {
                    self.bump();
                    if matches!(v.as_str(), "in" | "forall" | "true" | "false") {
                        return Err(LogicError::Syntax { line, col, message: format!("`{v}` is a keyword") });
                    }
                    if self.vars.contains(&v) {
                        return Err(LogicError::Duplicate(v).at(line, col));
                    }
                    if self.sig.lookup(&v).is_some() {
                        return Err(LogicError::Conflict(v).at(line, col));
                    }
                    self.vars.push(v.clone());
                    pending.push(v);
                }
                other => return Err(self.error(format!("expected variable, `in` or `.`, found {other:?}"))),
            }
        }
        let body = self.formula()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(format!("unexpected trailing {:?}", self.peek())));
        }
        let matrix = if guards.is_empty() {
            body
        } else {
            Formula::implies(Formula::and_all(guards), body)
        };
        UniversalSentence::new(self.sig.clone(), self.vars.clone(), matrix, steps)
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            if *self.peek() == Tok::DoubleArrow {
                return Err(self.error("chained `<->` needs parentheses"));
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(k) if k == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let (line, col) = self.here();
        if let Tok::Ident(name) = self.peek().clone() {
            if !self.vars.contains(&name) {
                if let Some(SymbolKind::Relation(arity)) = self.sig.lookup(&name) {
                    self.bump();
                    let args = if *self.peek() == Tok::LParen {
                        self.args()?
                    } else {
                        Vec::new()
                    };
                    if args.len() != arity {
                        return Err(LogicError::Arity { name, expected: arity, found: args.len() }.at(line, col));
                    }
                    return Ok(Formula::Rel(name, args));
                }
            }
        }
        let lhs = self.term()?;
        let op = self.bump();
        let rhs = self.term()?;
        match op {
            Tok::Eq => Ok(Formula::Eq(lhs, rhs)),
            Tok::Lt => Ok(Formula::Lt(lhs, rhs)),
            Tok::Le => Ok(Formula::le(lhs, rhs)),
            other => Err(LogicError::Syntax {
                line,
                col,
                message: format!("expected `=`, `<` or `<=` after term, found {other:?}"),
            }),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, LogicError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => return Err(self.error(format!("expected `,` or `)`, found {other:?}"))),
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let (line, col) = self.here();
        let name = self.ident("term")?;
        if self.vars.contains(&name) {
            return Ok(Term::Var(name));
        }
        match self.sig.lookup(&name) {
            Some(SymbolKind::Constant) => Ok(Term::Const(name)),
            Some(SymbolKind::Function(arity)) => {
                let args = self.args()?;
                if args.len() != arity {
                    return Err(LogicError::Arity { name, expected: arity, found: args.len() }.at(line, col));
                }
                Ok(Term::App(name, args))
            }
            Some(SymbolKind::Relation(_)) => Err(LogicError::KindMismatch(name).at(line, col)),
            None => Err(LogicError::Undeclared(name).at(line, col)),
        }
    }
}

/// Parse a `.lsq` source into a checked universal sentence.
pub fn parse_sentence(src: &str) -> Result<UniversalSentence, LogicError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, sig: Signature::new(), vars: Vec::new() };
    p.sentence()
}
