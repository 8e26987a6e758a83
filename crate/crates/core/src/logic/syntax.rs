use std::collections::BTreeSet;
use std::fmt;

use super::LogicError;

/// A named function or relation symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

/// Constants, function symbols and relation symbols of a first-order language.
///
/// Equality is built in and never declared.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub constants: Vec<String>,
    pub functions: Vec<Symbol>,
    pub relations: Vec<Symbol>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Constant,
    Function(usize),
    Relation(usize),
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_constant(&mut self, name: impl Into<String>) -> &mut Self {
        self.constants.push(name.into());
        self
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> &mut Self {
        self.functions.push(Symbol::new(name, arity));
        self
    }

    pub fn add_relation(&mut self, name: impl Into<String>, arity: usize) -> &mut Self {
        self.relations.push(Symbol::new(name, arity));
        self
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.iter().any(|c| c == name) {
            return Some(SymbolKind::Constant);
        }
        if let Some(f) = self.functions.iter().find(|f| f.name == name) {
            return Some(SymbolKind::Function(f.arity));
        }
        self.relations
            .iter()
            .find(|r| r.name == name)
            .map(|r| SymbolKind::Relation(r.arity))
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|f| f.name == name).map(|f| f.arity)
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.arity)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    /// Names distinct across kinds, arities of functions and relations positive.
    pub fn validate(&self) -> Result<(), LogicError> {
        let mut seen = BTreeSet::new();
        let all = self
            .constants
            .iter()
            .chain(self.functions.iter().map(|f| &f.name))
            .chain(self.relations.iter().map(|r| &r.name));
        for name in all {
            if !seen.insert(name.as_str()) {
                return Err(LogicError::DuplicateSymbol(name.clone()));
            }
        }
        for s in self.functions.iter().chain(&self.relations) {
            if s.arity == 0 {
                return Err(LogicError::ZeroArity(s.name.clone()));
            }
        }
        Ok(())
    }

    pub fn check_term(&self, term: &Term) -> Result<(), LogicError> {
        match term {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if self.is_constant(c) {
                    Ok(())
                } else {
                    Err(LogicError::UndeclaredSymbol(c.clone()))
                }
            }
            Term::App(f, args) => {
                let arity = self
                    .function_arity(f)
                    .ok_or_else(|| LogicError::UndeclaredSymbol(f.clone()))?;
                if arity != args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_atom(&self, atom: &Atom) -> Result<(), LogicError> {
        match atom {
            Atom::Rel(r, args) => {
                let arity = self
                    .relation_arity(r)
                    .ok_or_else(|| LogicError::UndeclaredSymbol(r.clone()))?;
                if arity != args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: r.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Atom::Eq(s, t) => {
                self.check_term(s)?;
                self.check_term(t)
            }
        }
    }

    pub fn check_clause(&self, clause: &Clause) -> Result<(), LogicError> {
        if clause.literals.is_empty() {
            return Err(LogicError::EmptyClause);
        }
        clause.literals.iter().try_for_each(|l| self.check_atom(&l.atom))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    /// Binary application `l op r`.
    pub fn bin(op: &str, l: Term, r: Term) -> Term {
        Term::App(op.to_string(), vec![l, r])
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn rename_vars(&self, f: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Const(c) => Term::Const(c.clone()),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| a.rename_vars(f)).collect()),
        }
    }
}

fn is_infix(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| !c.is_alphanumeric() && c != '_')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::App(g, args) if args.len() == 2 && is_infix(g) => {
                for (i, a) in args.iter().enumerate() {
                    if i == 1 {
                        write!(f, " {g} ")?;
                    }
                    match a {
                        Term::App(h, inner) if inner.len() == 2 && is_infix(h) => write!(f, "({a})")?,
                        _ => write!(f, "{a}")?,
                    }
                }
                Ok(())
            }
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
}

impl Atom {
    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom::Rel(name.into(), args)
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Atom::Rel(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Atom::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
        }
    }

    pub fn rename_vars(&self, f: &impl Fn(&str) -> String) -> Atom {
        match self {
            Atom::Rel(r, args) => Atom::Rel(r.clone(), args.iter().map(|a| a.rename_vars(f)).collect()),
            Atom::Eq(s, t) => Atom::Eq(s.rename_vars(f), t.rename_vars(f)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Atom::Eq(s, t) => write!(f, "{s} = {t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.atom, self.positive) {
            (a, true) => write!(f, "{a}"),
            (Atom::Eq(s, t), false) => write!(f, "{s} != {t}"),
            (a, false) => write!(f, "~{a}"),
        }
    }
}

/// A disjunction of literals whose free variables are read universally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    /// `body_1 & ... & body_k -> head`, with `head` absent meaning a purely negative clause.
    pub fn implication(body: Vec<Atom>, head: Option<Atom>) -> Self {
        let mut literals: Vec<Literal> = body.into_iter().map(Literal::neg).collect();
        literals.extend(head.map(Literal::pos));
        Clause { literals }
    }

    pub fn fact(atom: Atom) -> Self {
        Clause { literals: vec![Literal::pos(atom)] }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.atom.collect_vars(&mut out);
        }
        out
    }

    pub fn is_horn(&self) -> bool {
        self.literals.iter().filter(|l| l.positive).count() <= 1
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub type ClauseSet = Vec<Clause>;

/// `exists x̄. (A_11 & ... ) | (A_21 & ...) | ...` with positive atoms only.
///
/// Variables of different disjuncts are independent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoalFormula {
    pub disjuncts: Vec<Vec<Atom>>,
}

impl GoalFormula {
    pub fn new(disjuncts: Vec<Vec<Atom>>) -> Self {
        GoalFormula { disjuncts }
    }

    pub fn atom(atom: Atom) -> Self {
        GoalFormula { disjuncts: vec![vec![atom]] }
    }
}

impl fmt::Display for GoalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut vars = Vec::new();
        for d in &self.disjuncts {
            for a in d {
                a.collect_vars(&mut vars);
            }
        }
        if !vars.is_empty() {
            write!(f, "exists {} ", vars.join(" "))?;
        }
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            if d.len() > 1 {
                write!(f, "(")?;
            }
            for (j, a) in d.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{a}")?;
            }
            if d.len() > 1 {
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}
