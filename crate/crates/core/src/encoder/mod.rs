//! Translations of verification problems into clause sets and goals.
//!
//! Every encoding works over a monoid signature: a binary `*`, a unit `e` and
//! one constant per letter, so that a word `a1 a2 ... an` is represented by
//! the left-associated term `((a1 * a2) * ...) * an`.

mod mace4;
mod native;
mod param;
mod rewrite;
mod rmc;

pub use mace4::emit_mace4;
pub use native::{emit_native, parse_native};
pub use param::{condition_relation, encode_param};
pub use rewrite::{encode_rewriting, InitialSet, PatternItem, RewriteRule, RewriteSystem};
pub use rmc::{encode_rmc, RmcNames};

use thiserror::Error;

use crate::logic::{Atom, Clause, ClauseSet, GoalFormula, LogicError, Term, Vocabulary};

pub const STAR: &str = "*";
pub const UNIT: &str = "e";
/// Reachability predicate, shared by all encodings.
pub const REACH: &str = "R";
/// Initial configurations of a parameterized system.
pub const IN: &str = "In";
pub const INIT: &str = "Init";
pub const BAD: &str = "Bad";
pub const TRANS: &str = "Trans";
pub const T3: &str = "T3";
pub const T4: &str = "T4";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("a system needs at least one state")]
    NoStates,
    #[error("unknown letter or state `{0}`")]
    Unknown(String),
    #[error("alphabets differ: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// Clause set `Φ` with goal `Ψ`; a finite model of `Φ ∧ ¬Ψ` certifies safety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedProblem {
    pub vocabulary: Vocabulary,
    pub axioms: ClauseSet,
    pub goal: GoalFormula,
    /// Family or rule each axiom comes from, parallel to `axioms`.
    pub provenance: Vec<String>,
    /// Constant standing for each letter of the word alphabet, by letter index.
    pub letters: Vec<String>,
    /// Free-form remarks, such as symbol renamings.
    pub notes: Vec<String>,
}

impl EncodedProblem {
    fn new(vocabulary: Vocabulary, letters: Vec<String>) -> Self {
        EncodedProblem {
            vocabulary,
            axioms: Vec::new(),
            goal: GoalFormula::new(Vec::new()),
            provenance: Vec::new(),
            letters,
            notes: Vec::new(),
        }
    }

    fn push(&mut self, tag: impl Into<String>, clause: Clause) {
        self.axioms.push(clause);
        self.provenance.push(tag.into());
    }

    /// Checks every clause and the goal against the vocabulary.
    pub fn validate(&self) -> Result<(), EncodeError> {
        self.vocabulary.validate()?;
        for c in &self.axioms {
            self.vocabulary.check_clause(c)?;
        }
        for d in &self.goal.disjuncts {
            for a in d {
                self.vocabulary.check_atom(a)?;
            }
        }
        if self.provenance.len() != self.axioms.len() {
            return Err(EncodeError::Unsupported("provenance is not parallel to the axioms".into()));
        }
        Ok(())
    }

    /// Renames variables that share a name with a declared symbol, so the
    /// text formats read them back as variables.
    pub(crate) fn rename_clashing_vars(&mut self) {
        let v = &self.vocabulary;
        let mut taken: std::collections::BTreeSet<String> = v.constants.iter().cloned().collect();
        taken.extend(v.functions.iter().chain(&v.relations).map(|s| s.name.clone()));
        let rename = |vars: Vec<&str>| -> std::collections::BTreeMap<String, String> {
            let mut used = taken.clone();
            used.extend(vars.iter().map(|s| s.to_string()));
            let mut map = std::collections::BTreeMap::new();
            for name in vars {
                if taken.contains(name) && !map.contains_key(name) {
                    let fresh = fresh_name(name, &used);
                    used.insert(fresh.clone());
                    map.insert(name.to_string(), fresh);
                }
            }
            map
        };
        for c in &mut self.axioms {
            let map = rename(c.vars());
            if !map.is_empty() {
                let f = |n: &str| map.get(n).cloned().unwrap_or_else(|| n.to_string());
                c.literals = c
                    .literals
                    .iter()
                    .map(|l| crate::logic::Literal { positive: l.positive, atom: l.atom.rename_vars(&f) })
                    .collect();
            }
        }
        let mut goal_vars = Vec::new();
        for a in self.goal.disjuncts.iter().flatten() {
            a.collect_vars(&mut goal_vars);
        }
        let map = rename(goal_vars);
        if !map.is_empty() {
            let f = |n: &str| map.get(n).cloned().unwrap_or_else(|| n.to_string());
            self.goal.disjuncts =
                self.goal.disjuncts.iter().map(|d| d.iter().map(|a| a.rename_vars(&f)).collect()).collect();
        }
    }

    /// Number of axioms whose provenance starts with `prefix`.
    pub fn count_family(&self, prefix: &str) -> usize {
        self.provenance.iter().filter(|p| p.starts_with(prefix)).count()
    }

    /// The term `t_w` for a word over the letter alphabet.
    pub fn word_term(&self, word: &[usize]) -> Term {
        word_term(word.iter().map(|&l| Term::constant(&self.letters[l])))
    }
}

pub(crate) fn star(l: Term, r: Term) -> Term {
    Term::bin(STAR, l, r)
}

pub(crate) fn unit() -> Term {
    Term::constant(UNIT)
}

/// Left-associated product, `e` for the empty sequence.
pub(crate) fn word_term(items: impl IntoIterator<Item = Term>) -> Term {
    items.into_iter().reduce(star).unwrap_or_else(unit)
}

pub(crate) fn rel1(name: &str, t: Term) -> Atom {
    Atom::rel(name, vec![t])
}

pub(crate) fn var(name: &str) -> Term {
    Term::var(name)
}

pub(crate) fn monoid_axioms(p: &mut EncodedProblem, with_unit: bool) {
    let (x, y, z) = (var("x"), var("y"), var("z"));
    p.push(
        "monoid: associativity",
        Clause::fact(Atom::Eq(star(star(x.clone(), y.clone()), z.clone()), star(x.clone(), star(y, z)))),
    );
    if with_unit {
        p.push("monoid: left unit", Clause::fact(Atom::Eq(star(unit(), x.clone()), x.clone())));
        p.push("monoid: right unit", Clause::fact(Atom::Eq(star(x.clone(), unit()), x)));
    }
}

/// Variable names for goal patterns: `x, y, z, u, v, w`, then `x6, x7, ...`.
pub(crate) fn pattern_var(i: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}"))
}

/// `name`, or `name_1`, `name_2`, ... if taken.
pub(crate) fn fresh_name(name: &str, taken: &std::collections::BTreeSet<String>) -> String {
    if !taken.contains(name) {
        return name.to_string();
    }
    (1..).map(|i| format!("{name}_{i}")).find(|n| !taken.contains(n)).unwrap()
}
