//! Native clause format.
//!
//! ```text
//! % comment
//! vocab { const e, a, b; fn */2; rel R/1, In/1; letters a, b; }
//! note "free text";
//! clause "label" ~R(x) | R((x * a) * y) .
//! goal R(x) & Bad(x) | R((x * a) * y) .
//! ```
//!
//! Identifiers declared as constants are constants; any other identifier in
//! term position is a variable. Binary functions named by symbol characters
//! are written infix, left associative, with one precedence level. `~`
//! negates a literal and `!=` is negated equality. The clause label is
//! optional and carries provenance.

use crate::logic::{Atom, Clause, GoalFormula, Literal, Term, Vocabulary};

use super::{EncodeError, EncodedProblem};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic, round-trippable text for an encoded problem.
pub fn emit_native(p: &EncodedProblem) -> String {
    let mut out = String::new();
    let v = &p.vocabulary;
    out.push_str("vocab {\n");
    if !v.constants.is_empty() {
        out.push_str(&format!("  const {};\n", v.constants.join(", ")));
    }
    if !v.functions.is_empty() {
        let fs: Vec<String> = v.functions.iter().map(|f| format!("{}/{}", f.name, f.arity)).collect();
        out.push_str(&format!("  fn {};\n", fs.join(", ")));
    }
    if !v.relations.is_empty() {
        let rs: Vec<String> = v.relations.iter().map(|r| format!("{}/{}", r.name, r.arity)).collect();
        out.push_str(&format!("  rel {};\n", rs.join(", ")));
    }
    if !p.letters.is_empty() {
        out.push_str(&format!("  letters {};\n", p.letters.join(", ")));
    }
    out.push_str("}\n");
    for n in &p.notes {
        out.push_str(&format!("note {};\n", quote(n)));
    }
    for (c, tag) in p.axioms.iter().zip(&p.provenance) {
        if tag.is_empty() {
            out.push_str(&format!("clause {c} .\n"));
        } else {
            out.push_str(&format!("clause {} {c} .\n", quote(tag)));
        }
    }
    let goal = if p.goal.disjuncts.is_empty() {
        "false".to_string()
    } else {
        p.goal
            .disjuncts
            .iter()
            .map(|d| d.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" & "))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    out.push_str(&format!("goal {goal} .\n"));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Op(String),
    Str(String),
    Punct(&'static str),
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

const OP_CHARS: &str = "*+-^@$<>:\\#";

fn lex(src: &str) -> Result<Vec<Lexed>, EncodeError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| EncodeError::Parse { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(1, &mut i, &mut col);
        } else if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_alphanumeric() || c == '_' || c == '\'' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
        } else if c == '"' {
            let mut s = String::new();
            advance(1, &mut i, &mut col);
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err(l0, c0, "unterminated string".into())),
                    Some('"') => {
                        advance(1, &mut i, &mut col);
                        break;
                    }
                    Some('\\') if i + 1 < chars.len() => {
                        s.push(chars[i + 1]);
                        advance(2, &mut i, &mut col);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(1, &mut i, &mut col);
                    }
                }
            }
            out.push(Lexed { tok: Tok::Str(s), line: l0, column: c0 });
        } else if c == '!' && chars.get(i + 1) == Some(&'=') {
            advance(2, &mut i, &mut col);
            out.push(Lexed { tok: Tok::Punct("!="), line: l0, column: c0 });
        } else if let Some(p) = ["{", "}", "(", ")", ",", ";", ".", "|", "&", "~", "=", "/"].iter().find(|p| p.starts_with(c)) {
            advance(1, &mut i, &mut col);
            out.push(Lexed { tok: Tok::Punct(p), line: l0, column: c0 });
        } else if OP_CHARS.contains(c) {
            let start = i;
            while i < chars.len() && OP_CHARS.contains(chars[i]) {
                i += 1;
            }
            col += i - start;
            out.push(Lexed { tok: Tok::Op(chars[start..i].iter().collect()), line: l0, column: c0 });
        } else {
            return Err(err(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    vocab: Vocabulary,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn error(&self, message: impl Into<String>) -> EncodeError {
        let (line, column) = match self.toks.get(self.pos) {
            Some(l) => (l.line, l.column),
            None => self.toks.last().map(|l| (l.line, l.column + 1)).unwrap_or((1, 1)),
        };
        let found = match self.peek() {
            Some(Tok::Ident(s) | Tok::Op(s)) => format!("`{s}`"),
            Some(Tok::Str(s)) => format!("string {}", quote(s)),
            Some(Tok::Punct(p)) => format!("`{p}`"),
            None => "end of input".into(),
        };
        EncodeError::Parse { line, column, message: format!("{}, found {found}", message.into()) }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), EncodeError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`")))
        }
    }

    fn keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<String, EncodeError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s) | Tok::Op(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn arity(&mut self) -> Result<usize, EncodeError> {
        self.expect("/")?;
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                let n = s.parse().map_err(|_| self.error("expected an arity"))?;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected an arity")),
        }
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, EncodeError>) -> Result<Vec<T>, EncodeError> {
        let mut out = vec![item(self)?];
        while self.eat(",") {
            out.push(item(self)?);
        }
        self.expect(";")?;
        Ok(out)
    }

    fn vocab_block(&mut self) -> Result<Vec<String>, EncodeError> {
        if !self.keyword("vocab") {
            return Err(self.error("expected `vocab`"));
        }
        self.expect("{")?;
        let mut letters = Vec::new();
        while !self.eat("}") {
            if self.keyword("const") {
                for c in self.list(|p| p.name())? {
                    self.vocab.add_constant(c);
                }
            } else if self.keyword("fn") {
                for (f, a) in self.list(|p| Ok((p.name()?, p.arity()?)))? {
                    self.vocab.add_function(f, a);
                }
            } else if self.keyword("rel") {
                for (r, a) in self.list(|p| Ok((p.name()?, p.arity()?)))? {
                    self.vocab.add_relation(r, a);
                }
            } else if self.keyword("letters") {
                letters = self.list(|p| p.name())?;
            } else {
                return Err(self.error("expected `const`, `fn`, `rel`, `letters` or `}`"));
            }
        }
        self.vocab.validate()?;
        for l in &letters {
            if !self.vocab.is_constant(l) {
                return Err(EncodeError::Unknown(l.clone()));
            }
        }
        Ok(letters)
    }

    fn infix_op(&self) -> Option<String> {
        match self.peek() {
            Some(Tok::Op(s)) if self.vocab.function_arity(s) == Some(2) => Some(s.clone()),
            _ => None,
        }
    }

    fn term(&mut self) -> Result<Term, EncodeError> {
        let mut t = self.primary()?;
        while let Some(op) = self.infix_op() {
            self.pos += 1;
            let r = self.primary()?;
            t = Term::bin(&op, t, r);
        }
        Ok(t)
    }

    fn args(&mut self) -> Result<Vec<Term>, EncodeError> {
        self.expect("(")?;
        let mut args = vec![self.term()?];
        while self.eat(",") {
            args.push(self.term()?);
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> Result<Term, EncodeError> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        let start = self.pos;
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(self.error("expected a term"));
        };
        self.pos += 1;
        if self.vocab.is_constant(&name) {
            return Ok(Term::constant(name));
        }
        if let Some(arity) = self.vocab.function_arity(&name) {
            let args = self.args()?;
            if args.len() != arity {
                self.pos = start;
                return Err(self.error(format!("`{name}` expects {arity} arguments")));
            }
            return Ok(Term::app(name, args));
        }
        if self.vocab.relation_arity(&name).is_some() {
            self.pos = start;
            return Err(self.error("relation symbol in term position"));
        }
        Ok(Term::var(name))
    }

    /// An atom, or a negated equality when the second component is true.
    fn atom(&mut self) -> Result<(Atom, bool), EncodeError> {
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            if let Some(arity) = self.vocab.relation_arity(&name) {
                let start = self.pos;
                self.pos += 1;
                let args = self.args()?;
                if args.len() != arity {
                    self.pos = start;
                    return Err(self.error(format!("`{name}` expects {arity} arguments")));
                }
                return Ok((Atom::rel(name, args), false));
            }
        }
        let s = self.term()?;
        let negated = if self.eat("=") {
            false
        } else if self.eat("!=") {
            true
        } else {
            return Err(self.error("expected `=` or `!=`"));
        };
        Ok((Atom::Eq(s, self.term()?), negated))
    }

    fn literal(&mut self) -> Result<Literal, EncodeError> {
        let negated = self.eat("~");
        let (atom, neq) = self.atom()?;
        if negated && neq {
            return Err(self.error("double negation"));
        }
        Ok(Literal { positive: !(negated || neq), atom })
    }

    fn goal(&mut self) -> Result<GoalFormula, EncodeError> {
        if self.keyword("false") {
            self.expect(".")?;
            return Ok(GoalFormula::new(Vec::new()));
        }
        let mut disjuncts = Vec::new();
        loop {
            let mut conj = Vec::new();
            loop {
                let (a, neq) = self.atom()?;
                if neq {
                    return Err(self.error("goals are positive"));
                }
                conj.push(a);
                if !self.eat("&") {
                    break;
                }
            }
            disjuncts.push(conj);
            if !self.eat("|") {
                break;
            }
        }
        self.expect(".")?;
        Ok(GoalFormula::new(disjuncts))
    }
}

/// Parses the native format back into an encoded problem.
pub fn parse_native(src: &str) -> Result<EncodedProblem, EncodeError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, vocab: Vocabulary::new() };
    let letters = p.vocab_block()?;
    let mut problem = EncodedProblem::new(Vocabulary::new(), letters);
    let mut goal = None;
    while p.peek().is_some() {
        if p.keyword("note") {
            match p.peek().cloned() {
                Some(Tok::Str(s)) => {
                    p.pos += 1;
                    problem.notes.push(s);
                }
                _ => return Err(p.error("expected a string")),
            }
            p.expect(";")?;
        } else if p.keyword("clause") {
            let tag = match p.peek().cloned() {
                Some(Tok::Str(s)) => {
                    p.pos += 1;
                    s
                }
                _ => String::new(),
            };
            let mut lits = vec![p.literal()?];
            while p.eat("|") {
                lits.push(p.literal()?);
            }
            p.expect(".")?;
            problem.push(tag, Clause::new(lits));
        } else if p.keyword("goal") {
            if goal.is_some() {
                return Err(p.error("second goal"));
            }
            goal = Some(p.goal()?);
        } else {
            return Err(p.error("expected `note`, `clause` or `goal`"));
        }
    }
    problem.goal = goal.ok_or_else(|| p.error("missing goal"))?;
    problem.vocabulary = p.vocab;
    problem.validate()?;
    Ok(problem)
}
