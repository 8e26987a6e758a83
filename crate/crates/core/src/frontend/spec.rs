//! Spec files.
//!
//! A spec file holds one block of one of three kinds. `#` starts a comment.
//!
//! ```text
//! system me1 {
//!     states: green, black, blue, red;
//!     init: green;
//!     rule r1: forall LR {green, black} green -> black;
//!     rule r2: black -> blue;
//!     rule r3: exists L {black, blue, red} blue -> blue;
//!     bad: [red red];
//!     note: "mutual exclusion for red";
//! }
//!
//! rmc token {
//!     init: "token_init.aut";
//!     bad: "token_bad.aut";
//!     trans: "token.tdc";
//! }
//!
//! rewrite paterson_minus {
//!     alphabet: 0, 1;
//!     rule: x 0 1 y -> x 1 0 y where x in 0*, y in (1+0)*;
//!     rule: x 0 -> 0 x;
//!     seed: e;
//!     wrap: 0 _ 1;
//!     bad: x 0 0;
//! }
//! ```
//!
//! In a system block, rule names are optional, guards are `forall` or
//! `exists` with context `L`, `R` or `LR`, and `bad` lists generator words of
//! space-separated states. An rmc block names an automaton file for the
//! initial and bad sets and a transducer file, relative to the spec file. In
//! a rewrite block, pattern items that are letters of the alphabet are
//! letters and other names are variables; a seed `e` is the empty word, a
//! `wrap: u _ v` rule adds `u w v` for every initial `w`, and `init: RE`
//! adds a regular set of initial words.

use std::path::{Path, PathBuf};

use crate::encoder::{InitialSet, PatternItem, RewriteRule, RewriteSystem};
use crate::param::{Condition, Context, ParamSystem, Quantifier, StateId, TransitionRule};
use crate::regular::{Nfa, Regex, Transducer};

use super::automaton::{parse_automaton, parse_transducer};
use super::FrontendError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmcSpec {
    pub init: Nfa,
    pub bad: Nfa,
    pub trans: Transducer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecBody {
    System(ParamSystem),
    Rmc(RmcSpec),
    Rewrite(RewriteSystem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub name: String,
    pub notes: Vec<String>,
    pub body: SpecBody,
}

impl SpecFile {
    pub fn kind(&self) -> &'static str {
        match self.body {
            SpecBody::System(_) => "system",
            SpecBody::Rmc(_) => "rmc",
            SpecBody::Rewrite(_) => "rewrite",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Punct(&'static str),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
}

const PUNCT: [&str; 13] = ["->", "{", "}", "[", "]", ":", ";", ",", "(", ")", "*", "+", "|"];

fn lex(src: &str) -> Result<Vec<Spanned>, FrontendError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let column = src[line_start..i].chars().count() + 1;
        if c == '\n' {
            it.next();
            line += 1;
            line_start = i + 1;
        } else if c.is_whitespace() {
            it.next();
        } else if c == '#' {
            while it.peek().is_some_and(|&(_, c)| c != '\n') {
                it.next();
            }
        } else if c == '"' {
            it.next();
            let mut s = String::new();
            loop {
                match it.next() {
                    Some((_, '"')) => break,
                    Some((_, '\\')) => match it.next() {
                        Some((_, c)) => s.push(c),
                        None => return Err(FrontendError::parse(line, column, "unterminated string")),
                    },
                    Some((_, '\n')) | None => return Err(FrontendError::parse(line, column, "unterminated string")),
                    Some((_, c)) => s.push(c),
                }
            }
            let end = it.peek().map_or(src.len(), |&(j, _)| j);
            out.push(Spanned { tok: Tok::Str(s), line, column, start: i, end });
        } else if c.is_alphanumeric() || c == '_' || c == '\'' || c == '.' || c == '-' && !src[i..].starts_with("->") {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' || c == '.' || c == '-' && !src[j..].starts_with("->") {
                    end = j + c.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Ident(src[i..end].to_string()), line, column, start: i, end });
        } else if let Some(p) = PUNCT.iter().find(|p| src[i..].starts_with(**p)) {
            for _ in 0..p.len() {
                it.next();
            }
            out.push(Spanned { tok: Tok::Punct(p), line, column, start: i, end: i + p.len() });
        } else {
            return Err(FrontendError::parse(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
    base: Option<&'a Path>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => {
                let line = self.src.lines().count().max(1);
                let column = self.src.lines().last().map_or(0, |l| l.chars().count()) + 1;
                (line, column)
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        let (l, c) = self.here();
        FrontendError::parse(l, c, message)
    }

    fn semantic_at(&self, index: usize, message: impl Into<String>) -> FrontendError {
        let s = &self.toks[index];
        FrontendError::semantic(s.line, s.column, message)
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Str(s)) => format!("\"{s}\""),
            Some(Tok::Punct(p)) => format!("`{p}`"),
            None => "end of input".into(),
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), FrontendError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", self.found())))
        }
    }

    fn ident(&mut self) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a name, found {}", self.found()))),
        }
    }

    fn string(&mut self) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a quoted string, found {}", self.found()))),
        }
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    /// Comma-separated names up to (not including) `stop`.
    fn names(&mut self, stop: &str) -> Result<Vec<(String, usize)>, FrontendError> {
        let mut out = vec![(self.ident()?, self.pos - 1)];
        while self.eat(",") {
            out.push((self.ident()?, self.pos - 1));
        }
        if !matches!(self.peek(), Some(Tok::Punct(p)) if *p == stop) {
            return Err(self.error(format!("expected `,` or `{stop}`, found {}", self.found())));
        }
        Ok(out)
    }

    fn file(&mut self) -> Result<SpecFile, FrontendError> {
        let kind_at = self.pos;
        let kind = self.ident()?;
        let name = self.ident()?;
        self.expect("{")?;
        let mut notes = Vec::new();
        let body = match kind.as_str() {
            "system" => SpecBody::System(self.system(&name, &mut notes)?),
            "rmc" => SpecBody::Rmc(self.rmc(&mut notes)?),
            "rewrite" => SpecBody::Rewrite(self.rewrite(&name, &mut notes)?),
            other => {
                return Err(self.semantic_at(kind_at, format!("unknown block kind `{other}`; expected system, rmc or rewrite")))
            }
        };
        self.expect("}")?;
        if self.peek().is_some() {
            return Err(self.error(format!("unexpected {} after the block", self.found())));
        }
        Ok(SpecFile { name, notes, body })
    }

    fn key(&mut self) -> Result<Option<(String, usize)>, FrontendError> {
        if matches!(self.peek(), Some(Tok::Punct("}")) | None) {
            return Ok(None);
        }
        let at = self.pos;
        let k = self.ident()?;
        Ok(Some((k, at)))
    }

    fn note(&mut self, notes: &mut Vec<String>) -> Result<(), FrontendError> {
        self.expect(":")?;
        notes.push(self.string()?);
        self.expect(";")
    }

    fn state(&self, states: &[String], name: &str, at: usize) -> Result<StateId, FrontendError> {
        states.iter().position(|s| s == name).ok_or_else(|| self.semantic_at(at, format!("unknown state `{name}`")))
    }

    fn system(&mut self, name: &str, notes: &mut Vec<String>) -> Result<ParamSystem, FrontendError> {
        let mut states: Option<Vec<String>> = None;
        let mut init = None;
        let mut rules = Vec::new();
        let mut bad = None;
        while let Some((k, at)) = self.key()? {
            match k.as_str() {
                "states" => {
                    self.expect(":")?;
                    let names = self.names(";")?;
                    self.expect(";")?;
                    for (i, (n, a)) in names.iter().enumerate() {
                        if names[..i].iter().any(|(m, _)| m == n) {
                            return Err(self.semantic_at(*a, format!("state `{n}` declared twice")));
                        }
                    }
                    if states.replace(names.into_iter().map(|(n, _)| n).collect()).is_some() {
                        return Err(self.semantic_at(at, "`states` given twice"));
                    }
                }
                "init" => {
                    let st = states.as_ref().ok_or_else(|| self.semantic_at(at, "`states` must come first"))?;
                    self.expect(":")?;
                    let n = self.ident()?;
                    let id = self.state(st, &n, self.pos - 1)?;
                    self.expect(";")?;
                    if init.replace(id).is_some() {
                        return Err(self.semantic_at(at, "`init` given twice"));
                    }
                }
                "rule" => {
                    let st = states.clone().ok_or_else(|| self.semantic_at(at, "`states` must come first"))?;
                    rules.push(self.param_rule(&st)?);
                }
                "bad" => {
                    let st = states.clone().ok_or_else(|| self.semantic_at(at, "`states` must come first"))?;
                    self.expect(":")?;
                    self.expect("[")?;
                    let mut words = Vec::new();
                    loop {
                        let mut w = Vec::new();
                        while let Some(Tok::Ident(n)) = self.peek().cloned() {
                            w.push(self.state(&st, &n, self.pos)?);
                            self.pos += 1;
                        }
                        if w.is_empty() {
                            return Err(self.error(format!("expected a word of states, found {}", self.found())));
                        }
                        words.push(w);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect("]")?;
                    self.expect(";")?;
                    if bad.replace(words).is_some() {
                        return Err(self.semantic_at(at, "`bad` given twice"));
                    }
                }
                "note" => self.note(notes)?,
                other => return Err(self.semantic_at(at, format!("unknown key `{other}` in a system block"))),
            }
        }
        let (l, c) = self.here();
        let states = states.ok_or_else(|| FrontendError::semantic(l, c, "missing `states`"))?;
        let initial = init.ok_or_else(|| FrontendError::semantic(l, c, "missing `init`"))?;
        let bad = bad.ok_or_else(|| FrontendError::semantic(l, c, "missing `bad`"))?;
        ParamSystem::new(name, states, initial, rules, bad).map_err(|e| FrontendError::semantic(l, c, e.to_string()))
    }

    fn param_rule(&mut self, states: &[String]) -> Result<TransitionRule, FrontendError> {
        let name = match self.peek() {
            Some(Tok::Ident(_)) => Some(self.ident()?),
            _ => None,
        };
        self.expect(":")?;
        let guard = if self.is_ident("forall") || self.is_ident("exists") {
            let q = if self.ident()? == "forall" { Quantifier::Forall } else { Quantifier::Exists };
            let ctx_at = self.pos;
            let context = match self.ident()?.as_str() {
                "L" => Context::L,
                "R" => Context::R,
                "LR" => Context::LR,
                other => return Err(self.semantic_at(ctx_at, format!("unknown context `{other}`; expected L, R or LR"))),
            };
            self.expect("{")?;
            let mut set = Vec::new();
            for (n, at) in self.names("}")? {
                set.push(self.state(states, &n, at)?);
            }
            self.expect("}")?;
            Some(match q {
                Quantifier::Forall => Condition::forall(context, set),
                Quantifier::Exists => Condition::exists(context, set),
            })
        } else {
            None
        };
        let from_name = self.ident()?;
        let from = self.state(states, &from_name, self.pos - 1)?;
        self.expect("->")?;
        let to_name = self.ident()?;
        let to = self.state(states, &to_name, self.pos - 1)?;
        self.expect(";")?;
        Ok(TransitionRule { name, guard, from, to })
    }

    fn load(&self, at: usize, path: &str) -> Result<(PathBuf, String), FrontendError> {
        let full = match self.base {
            Some(b) => b.join(path),
            None => PathBuf::from(path),
        };
        std::fs::read_to_string(&full)
            .map(|text| (full.clone(), text))
            .map_err(|e| self.semantic_at(at, format!("cannot read `{}`: {e}", full.display())))
    }

    fn rmc(&mut self, notes: &mut Vec<String>) -> Result<RmcSpec, FrontendError> {
        let mut init = None;
        let mut bad = None;
        let mut trans = None;
        while let Some((k, at)) = self.key()? {
            match k.as_str() {
                "init" | "bad" | "trans" => {
                    self.expect(":")?;
                    let file_at = self.pos;
                    let path = self.string()?;
                    self.expect(";")?;
                    let (full, text) = self.load(file_at, &path)?;
                    let in_file = |e: FrontendError| FrontendError::InFile { path: full.display().to_string(), source: Box::new(e) };
                    let dup = match k.as_str() {
                        "init" => init.replace(parse_automaton(&text).map_err(in_file)?).is_some(),
                        "bad" => bad.replace(parse_automaton(&text).map_err(in_file)?).is_some(),
                        _ => trans.replace(parse_transducer(&text).map_err(in_file)?).is_some(),
                    };
                    if dup {
                        return Err(self.semantic_at(at, format!("`{k}` given twice")));
                    }
                }
                "note" => self.note(notes)?,
                other => return Err(self.semantic_at(at, format!("unknown key `{other}` in an rmc block"))),
            }
        }
        let (l, c) = self.here();
        let init: Nfa = init.ok_or_else(|| FrontendError::semantic(l, c, "missing `init`"))?;
        let bad: Nfa = bad.ok_or_else(|| FrontendError::semantic(l, c, "missing `bad`"))?;
        let trans: Transducer = trans.ok_or_else(|| FrontendError::semantic(l, c, "missing `trans`"))?;
        for (what, alpha) in [("bad", &bad.alphabet), ("trans", &trans.alphabet)] {
            if alpha != &init.alphabet {
                return Err(FrontendError::semantic(
                    l,
                    c,
                    format!("alphabet of `{what}` ({}) differs from `init` ({})", alpha.join(" "), init.alphabet.join(" ")),
                ));
            }
        }
        Ok(RmcSpec { init, bad, trans })
    }

    /// Raw source text of the tokens up to a `,` or `;` outside parentheses.
    fn regex_text(&mut self) -> Result<(String, usize), FrontendError> {
        let first = self.pos;
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t {
                Tok::Punct("(") => depth += 1,
                Tok::Punct(")") => depth = depth.saturating_sub(1),
                Tok::Punct(",") | Tok::Punct(";") if depth == 0 => break,
                Tok::Punct("*" | "+" | "|") | Tok::Ident(_) => {}
                _ => return Err(self.error(format!("unexpected {} in a regular expression", self.found()))),
            }
            self.pos += 1;
        }
        if self.pos == first {
            return Err(self.error("expected a regular expression"));
        }
        Ok((self.src[self.toks[first].start..self.toks[self.pos - 1].end].to_string(), first))
    }

    fn regex(&mut self, alphabet: &[String]) -> Result<(String, Regex), FrontendError> {
        let (text, at) = self.regex_text()?;
        let re = Regex::parse(&text, alphabet).map_err(|e| self.semantic_at(at, e.to_string()))?;
        Ok((text, re))
    }

    fn pattern_item(&self, alphabet: &[String], s: &str) -> Vec<PatternItem> {
        if let Some(i) = alphabet.iter().position(|a| a == s) {
            return vec![PatternItem::Letter(i)];
        }
        let split: Option<Vec<usize>> =
            s.chars().map(|c| alphabet.iter().position(|a| a.chars().eq(std::iter::once(c)))).collect();
        match split {
            Some(ls) if !ls.is_empty() => ls.into_iter().map(PatternItem::Letter).collect(),
            _ => vec![PatternItem::Var(s.to_string())],
        }
    }

    /// Pattern items up to `->`, `where`, `;` or `_`.
    fn pattern(&mut self, alphabet: &[String]) -> Vec<PatternItem> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(s)) = self.peek().cloned() {
            if s == "where" || s == "_" {
                break;
            }
            out.extend(self.pattern_item(alphabet, &s));
            self.pos += 1;
        }
        out
    }

    fn word(&mut self, alphabet: &[String], allow_empty: bool) -> Result<Vec<usize>, FrontendError> {
        let mut w = Vec::new();
        while let Some(Tok::Ident(s)) = self.peek().cloned() {
            if s == "_" {
                break;
            }
            for it in self.pattern_item(alphabet, &s) {
                match it {
                    PatternItem::Letter(a) => w.push(a),
                    PatternItem::Var(v) if v == "e" && allow_empty => {}
                    PatternItem::Var(v) => return Err(self.semantic_at(self.pos, format!("`{v}` is not a letter"))),
                }
            }
            self.pos += 1;
        }
        Ok(w)
    }

    fn rewrite(&mut self, name: &str, notes: &mut Vec<String>) -> Result<RewriteSystem, FrontendError> {
        let mut alphabet: Option<Vec<String>> = None;
        let mut rules = Vec::new();
        let mut initial = InitialSet::default();
        let mut bad = Vec::new();
        while let Some((k, at)) = self.key()? {
            if k == "note" {
                self.note(notes)?;
                continue;
            }
            if k == "alphabet" {
                self.expect(":")?;
                let names = self.names(";")?;
                self.expect(";")?;
                if alphabet.replace(names.into_iter().map(|(n, _)| n).collect()).is_some() {
                    return Err(self.semantic_at(at, "`alphabet` given twice"));
                }
                continue;
            }
            let alpha = alphabet.clone().ok_or_else(|| self.semantic_at(at, "`alphabet` must come first"))?;
            match k.as_str() {
                "rule" => {
                    let name = match self.peek() {
                        Some(Tok::Ident(_)) => Some(self.ident()?),
                        _ => None,
                    };
                    self.expect(":")?;
                    let lhs_at = self.pos;
                    let lhs = self.pattern(&alpha);
                    if lhs.is_empty() {
                        return Err(self.error(format!("expected a pattern, found {}", self.found())));
                    }
                    self.expect("->")?;
                    let rhs = self.pattern(&alpha);
                    let mut constraints = Vec::new();
                    if self.is_ident("where") {
                        self.pos += 1;
                        loop {
                            let v = self.ident()?;
                            if !self.is_ident("in") {
                                return Err(self.error(format!("expected `in`, found {}", self.found())));
                            }
                            self.pos += 1;
                            let (text, re) = self.regex(&alpha)?;
                            constraints.push((v, text, re));
                            if !self.eat(",") {
                                break;
                            }
                        }
                    }
                    self.expect(";")?;
                    let rule = RewriteRule { name, lhs, rhs, constraints };
                    rule.validate().map_err(|e| self.semantic_at(lhs_at, e.to_string()))?;
                    rules.push(rule);
                }
                "seed" => {
                    self.expect(":")?;
                    let w = self.word(&alpha, true)?;
                    self.expect(";")?;
                    initial.seeds.push(w);
                }
                "wrap" => {
                    self.expect(":")?;
                    let l = self.word(&alpha, false)?;
                    if !self.is_ident("_") {
                        return Err(self.error(format!("expected `_`, found {}", self.found())));
                    }
                    self.pos += 1;
                    let r = self.word(&alpha, false)?;
                    self.expect(";")?;
                    initial.wraps.push((l, r));
                }
                "init" => {
                    self.expect(":")?;
                    let re = self.regex(&alpha)?;
                    self.expect(";")?;
                    if initial.regular.replace(re).is_some() {
                        return Err(self.semantic_at(at, "`init` given twice"));
                    }
                }
                "bad" => {
                    self.expect(":")?;
                    loop {
                        let p = self.pattern(&alpha);
                        if p.is_empty() {
                            return Err(self.error(format!("expected a pattern, found {}", self.found())));
                        }
                        bad.push(p);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect(";")?;
                }
                other => return Err(self.semantic_at(at, format!("unknown key `{other}` in a rewrite block"))),
            }
        }
        let (l, c) = self.here();
        let alphabet = alphabet.ok_or_else(|| FrontendError::semantic(l, c, "missing `alphabet`"))?;
        if initial.seeds.is_empty() && initial.regular.is_none() {
            return Err(FrontendError::semantic(l, c, "no initial words: give `seed` or `init`"));
        }
        let rw = RewriteSystem { name: name.to_string(), alphabet, rules, initial, bad };
        rw.validate().map_err(|e| FrontendError::semantic(l, c, e.to_string()))?;
        Ok(rw)
    }
}

/// Parses spec text; automaton files of rmc blocks are resolved against
/// `base` when given, otherwise against the working directory.
pub fn parse_spec_in(src: &str, base: Option<&Path>) -> Result<SpecFile, FrontendError> {
    let mut p = Parser { src, toks: lex(src)?, pos: 0, base };
    p.file()
}

pub fn parse_spec(src: &str) -> Result<SpecFile, FrontendError> {
    parse_spec_in(src, None)
}

/// Reads and parses a spec file, resolving automaton files next to it.
pub fn load_spec(path: &Path) -> Result<SpecFile, FrontendError> {
    let text = std::fs::read_to_string(path).map_err(|e| FrontendError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_spec_in(&text, path.parent()).map_err(|e| FrontendError::InFile { path: path.display().to_string(), source: Box::new(e) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ME1: &str = r#"
system me1 {
    states: green, black, blue, red;
    init: green;
    rule r1: forall LR {green, black} green -> black;
    rule: black -> blue;
    rule: exists L {black, blue, red} blue -> blue;
    rule: forall L {green} blue -> red;
    rule: red -> black;
    rule: black -> green;
    bad: [red red];
}
"#;

    #[test]
    fn system_block() {
        let s = parse_spec(ME1).unwrap();
        assert_eq!(s.name, "me1");
        let SpecBody::System(sys) = s.body else { panic!() };
        assert_eq!(sys.states.len(), 4);
        assert_eq!(sys.rules.len(), 6);
        assert_eq!(sys.rules[0].name.as_deref(), Some("r1"));
        assert_eq!(sys.rules[0].guard, Some(Condition::forall(Context::LR, [0, 1])));
        assert_eq!(sys.rules[2].guard, Some(Condition::exists(Context::L, [1, 2, 3])));
        assert_eq!(sys.bad, vec![vec![3, 3]]);
    }

    #[test]
    fn malformed_rule_names_the_token() {
        let src = ME1.replace("rule: black -> blue;", "rule: black => blue;");
        let err = parse_spec(&src).unwrap_err();
        assert_eq!(err.to_string(), "6:17: unexpected character `=`");
        let src = ME1.replace("rule: black -> blue;", "rule: black -> purple;");
        let err = parse_spec(&src).unwrap_err();
        assert_eq!(err.to_string(), "6:20: unknown state `purple`");
        let src = ME1.replace("rule: black -> blue;", "rule: forall M {red} black -> blue;");
        assert!(parse_spec(&src).unwrap_err().to_string().contains("unknown context `M`"));
        let src = ME1.replace("init: green;", "init: green;\n    colour: red;");
        assert_eq!(parse_spec(&src).unwrap_err().to_string(), "5:5: unknown key `colour` in a system block");
    }

    #[test]
    fn rewrite_block() {
        let src = r#"
rewrite pm {
    alphabet: 0, 1;
    rule: x 0 1 y -> x 1 0 y where x in 0*, y in (1+0)*;
    rule two: x 101 y -> x 110 y where y in 1*;
    rule: x 0 -> 0 x;
    seed: e;
    wrap: 0 _ 1;
    bad: x 0 0;
}
"#;
        let s = parse_spec(src).unwrap();
        let SpecBody::Rewrite(rw) = s.body else { panic!() };
        assert_eq!(rw.rules.len(), 3);
        assert_eq!(rw.rules[0].constraints[1].1, "(1+0)*");
        assert_eq!(rw.rules[1].lhs.len(), 5);
        assert_eq!(rw.initial.seeds, vec![Vec::<usize>::new()]);
        assert_eq!(rw.initial.wraps, vec![(vec![0], vec![1])]);
        assert_eq!(rw.initial_words(4).len(), 3);
        assert_eq!(rw.bad, vec![vec![PatternItem::Var("x".into()), PatternItem::Letter(0), PatternItem::Letter(0)]]);
    }

    #[test]
    fn rmc_block_reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let aut = "alphabet: n t\nstates: a b\ninitial: a\naccepting: b\ntrans: a t b\ntrans: b n b\n";
        std::fs::write(dir.path().join("i.aut"), aut).unwrap();
        std::fs::write(dir.path().join("b.aut"), aut).unwrap();
        std::fs::write(dir.path().join("t.tdc"), "alphabet: n t\nstates: p\ninitial: p\naccepting: p\ntrans: p n/n p\n").unwrap();
        let spec = "rmc r {\n  init: \"i.aut\";\n  bad: \"b.aut\";\n  trans: \"t.tdc\";\n}\n";
        std::fs::write(dir.path().join("r.spec"), spec).unwrap();
        let s = load_spec(&dir.path().join("r.spec")).unwrap();
        assert_eq!(s.kind(), "rmc");
        let missing = spec.replace("t.tdc", "nope.tdc");
        let err = parse_spec_in(&missing, Some(dir.path())).unwrap_err();
        assert!(err.to_string().starts_with("4:10: cannot read"), "{err}");
    }
}
