//! Regular expressions over a named alphabet.
//!
//! Syntax: letters, `eps` for the empty word, `empty` for the empty language,
//! juxtaposition for concatenation, `+` or `|` for union, postfix `*`, and
//! parentheses. A run of characters that is not itself a letter is split into
//! single-character letters, so `01` means `0 1` over `{0, 1}`.

use std::collections::BTreeSet;

use super::automata::{Letter, Nfa};
use super::RegularError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Eps,
    Letter(Letter),
    Concat(Box<Regex>, Box<Regex>),
    Alt(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Sym(Letter),
    Eps,
    Empty,
    Plus,
    Star,
    Open,
    Close,
}

/// Splits an alphanumeric run into alphabet letters.
pub(crate) fn split_run(run: &str, alphabet: &[String]) -> Option<Vec<Letter>> {
    if let Some(i) = alphabet.iter().position(|a| a == run) {
        return Some(vec![i]);
    }
    run.chars().map(|c| alphabet.iter().position(|a| a.len() == c.len_utf8() && a.starts_with(c))).collect()
}

fn tokenize(src: &str, alphabet: &[String]) -> Result<Vec<Tok>, RegularError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '|' => {
                out.push(Tok::Plus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            'ε' => {
                out.push(Tok::Eps);
                i += 1
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let run: String = chars[start..i].iter().collect();
                match run.as_str() {
                    "eps" if !alphabet.contains(&run) => out.push(Tok::Eps),
                    "empty" if !alphabet.contains(&run) => out.push(Tok::Empty),
                    _ => {
                        let letters = split_run(&run, alphabet).ok_or(RegularError::UnknownLetter(run))?;
                        out.extend(letters.into_iter().map(Tok::Sym));
                    }
                }
            }
            other => return Err(RegularError::Syntax(format!("unexpected `{other}` in regular expression"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn alt(&mut self) -> Result<Regex, RegularError> {
        let mut left = self.concat()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            left = Regex::Alt(Box::new(left), Box::new(self.concat()?));
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex, RegularError> {
        let mut items = Vec::new();
        while matches!(self.peek(), Some(Tok::Sym(_) | Tok::Eps | Tok::Empty | Tok::Open)) {
            items.push(self.starred()?);
        }
        let mut it = items.into_iter();
        let first = it.next().ok_or_else(|| RegularError::Syntax("expected a regular expression".into()))?;
        Ok(it.fold(first, |acc, r| Regex::Concat(Box::new(acc), Box::new(r))))
    }

    fn starred(&mut self) -> Result<Regex, RegularError> {
        let mut r = match self.toks[self.pos].clone() {
            Tok::Sym(a) => {
                self.pos += 1;
                Regex::Letter(a)
            }
            Tok::Eps => {
                self.pos += 1;
                Regex::Eps
            }
            Tok::Empty => {
                self.pos += 1;
                Regex::Empty
            }
            Tok::Open => {
                self.pos += 1;
                let inner = self.alt()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(RegularError::Syntax("missing `)`".into()));
                }
                self.pos += 1;
                inner
            }
            _ => unreachable!(),
        };
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }
}

impl Regex {
    pub fn parse(src: &str, alphabet: &[String]) -> Result<Regex, RegularError> {
        let mut p = Parser { toks: tokenize(src, alphabet)?, pos: 0 };
        let r = p.alt()?;
        if p.pos != p.toks.len() {
            return Err(RegularError::Syntax(format!("unexpected trailing input in `{src}`")));
        }
        Ok(r)
    }

    /// Glushkov automaton: one state per letter occurrence plus an initial state.
    pub fn to_nfa(&self, alphabet: &[String]) -> Nfa {
        let mut positions = Vec::new();
        let mut follow = Vec::new();
        let info = self.build(&mut positions, &mut follow);
        let mut nfa = Nfa::new(alphabet.to_vec(), positions.len() + 1);
        for &p in &info.first {
            nfa.add_transition(0, positions[p], p + 1);
        }
        for (p, next) in follow.iter().enumerate() {
            for &q in next {
                nfa.add_transition(p + 1, positions[q], q + 1);
            }
        }
        if info.nullable {
            nfa.accepting.insert(0);
        }
        nfa.accepting.extend(info.last.iter().map(|p| p + 1));
        nfa
    }

    /// `Σ*` over the given alphabet size, up to the obvious syntactic forms.
    pub fn is_universal_star(&self, alphabet_size: usize) -> bool {
        fn letters(r: &Regex, out: &mut BTreeSet<Letter>) -> bool {
            match r {
                Regex::Letter(a) => {
                    out.insert(*a);
                    true
                }
                Regex::Alt(a, b) => letters(a, out) && letters(b, out),
                _ => false,
            }
        }
        match self {
            Regex::Star(inner) => {
                let mut set = BTreeSet::new();
                letters(inner, &mut set) && set.len() == alphabet_size
            }
            _ => false,
        }
    }

    fn build(&self, positions: &mut Vec<Letter>, follow: &mut Vec<BTreeSet<usize>>) -> Glushkov {
        match self {
            Regex::Empty => Glushkov { nullable: false, first: BTreeSet::new(), last: BTreeSet::new() },
            Regex::Eps => Glushkov { nullable: true, first: BTreeSet::new(), last: BTreeSet::new() },
            Regex::Letter(a) => {
                positions.push(*a);
                follow.push(BTreeSet::new());
                let p = positions.len() - 1;
                Glushkov { nullable: false, first: BTreeSet::from([p]), last: BTreeSet::from([p]) }
            }
            Regex::Alt(a, b) => {
                let ga = a.build(positions, follow);
                let gb = b.build(positions, follow);
                Glushkov { nullable: ga.nullable || gb.nullable, first: &ga.first | &gb.first, last: &ga.last | &gb.last }
            }
            Regex::Concat(a, b) => {
                let ga = a.build(positions, follow);
                let gb = b.build(positions, follow);
                for &p in &ga.last {
                    follow[p].extend(gb.first.iter().copied());
                }
                Glushkov {
                    nullable: ga.nullable && gb.nullable,
                    first: if ga.nullable { &ga.first | &gb.first } else { ga.first },
                    last: if gb.nullable { &ga.last | &gb.last } else { gb.last },
                }
            }
            Regex::Star(a) => {
                let g = a.build(positions, follow);
                for &p in &g.last {
                    follow[p].extend(g.first.iter().copied());
                }
                Glushkov { nullable: true, ..g }
            }
        }
    }
}

struct Glushkov {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}
