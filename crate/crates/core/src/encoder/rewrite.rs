use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::logic::{Atom, Clause, GoalFormula, Term, Vocabulary};
use crate::regular::{minimal_dfa, Dfa, Letter, Regex};

use super::{fresh_name, monoid_axioms, rel1, var, word_term, EncodeError, EncodedProblem, REACH, STAR, UNIT};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternItem {
    Letter(Letter),
    Var(String),
}

/// `lhs -> rhs`, where each variable occurs once on each side and ranges
/// over the words of its constraint (all words when unconstrained).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: Option<String>,
    pub lhs: Vec<PatternItem>,
    pub rhs: Vec<PatternItem>,
    /// Variable, source text, parsed expression.
    pub constraints: Vec<(String, String, Regex)>,
}

/// Initial words: the seeds and the regular set, closed under wrapping a
/// word `w` into `left w right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialSet {
    pub seeds: Vec<Vec<Letter>>,
    pub wraps: Vec<(Vec<Letter>, Vec<Letter>)>,
    pub regular: Option<(String, Regex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    pub name: String,
    pub alphabet: Vec<String>,
    pub rules: Vec<RewriteRule>,
    pub initial: InitialSet,
    /// Bad words are the instances of these patterns (unconstrained variables).
    pub bad: Vec<Vec<PatternItem>>,
}

fn pattern_vars(p: &[PatternItem]) -> Vec<&str> {
    p.iter()
        .filter_map(|i| match i {
            PatternItem::Var(v) => Some(v.as_str()),
            PatternItem::Letter(_) => None,
        })
        .collect()
}

impl RewriteRule {
    pub fn validate(&self) -> Result<(), EncodeError> {
        let l = pattern_vars(&self.lhs);
        let r = pattern_vars(&self.rhs);
        let ls: BTreeSet<&str> = l.iter().copied().collect();
        let rs: BTreeSet<&str> = r.iter().copied().collect();
        if ls.len() != l.len() || rs.len() != r.len() {
            return Err(EncodeError::Unsupported("a variable occurs twice on one side of a rule".into()));
        }
        if ls != rs {
            return Err(EncodeError::Unsupported("rule sides use different variables".into()));
        }
        for (v, _, _) in &self.constraints {
            if !ls.contains(v.as_str()) {
                return Err(EncodeError::Unknown(v.clone()));
            }
        }
        Ok(())
    }

    fn constraint(&self, v: &str) -> Option<&Regex> {
        self.constraints.iter().find(|(x, _, _)| x == v).map(|(_, _, r)| r)
    }
}

/// All ways of matching `word` against `pattern`, as variable bindings.
fn matches(pattern: &[PatternItem], word: &[Letter], bind: &mut Vec<(String, Vec<Letter>)>, out: &mut Vec<BTreeMap<String, Vec<Letter>>>) {
    match pattern.split_first() {
        None => {
            if word.is_empty() {
                out.push(bind.iter().cloned().collect());
            }
        }
        Some((PatternItem::Letter(a), rest)) => {
            if word.first() == Some(a) {
                matches(rest, &word[1..], bind, out);
            }
        }
        Some((PatternItem::Var(v), rest)) => {
            for k in 0..=word.len() {
                bind.push((v.clone(), word[..k].to_vec()));
                matches(rest, &word[k..], bind, out);
                bind.pop();
            }
        }
    }
}

fn instantiate(pattern: &[PatternItem], binding: &BTreeMap<String, Vec<Letter>>) -> Vec<Letter> {
    let mut out = Vec::new();
    for i in pattern {
        match i {
            PatternItem::Letter(a) => out.push(*a),
            PatternItem::Var(v) => out.extend_from_slice(&binding[v]),
        }
    }
    out
}

impl RewriteSystem {
    pub fn validate(&self) -> Result<(), EncodeError> {
        for r in &self.rules {
            r.validate()?;
        }
        if self.bad.is_empty() {
            return Err(EncodeError::Unsupported("no bad pattern given".into()));
        }
        for b in &self.bad {
            let vs = pattern_vars(b);
            if vs.iter().collect::<BTreeSet<_>>().len() != vs.len() {
                return Err(EncodeError::Unsupported("a variable occurs twice in a bad pattern".into()));
            }
        }
        Ok(())
    }

    /// One-step successors of `word`.
    pub fn successors(&self, word: &[Letter]) -> BTreeSet<Vec<Letter>> {
        let dfas: Vec<Vec<(String, Dfa)>> = self
            .rules
            .iter()
            .map(|r| r.constraints.iter().map(|(v, _, re)| (v.clone(), minimal_dfa(&re.to_nfa(&self.alphabet)))).collect())
            .collect();
        let mut out = BTreeSet::new();
        for (rule, dfas) in self.rules.iter().zip(&dfas) {
            let mut found = Vec::new();
            matches(&rule.lhs, word, &mut Vec::new(), &mut found);
            for b in found {
                if dfas.iter().all(|(v, d)| d.accepts(&b[v])) {
                    out.insert(instantiate(&rule.rhs, &b));
                }
            }
        }
        out
    }

    pub fn is_bad(&self, word: &[Letter]) -> bool {
        self.bad.iter().any(|p| {
            let mut found = Vec::new();
            matches(p, word, &mut Vec::new(), &mut found);
            !found.is_empty()
        })
    }

    /// Initial words of length at most `max_len`.
    pub fn initial_words(&self, max_len: usize) -> BTreeSet<Vec<Letter>> {
        let mut out: BTreeSet<Vec<Letter>> = self.initial.seeds.iter().filter(|s| s.len() <= max_len).cloned().collect();
        if let Some((_, re)) = &self.initial.regular {
            let d = minimal_dfa(&re.to_nfa(&self.alphabet));
            for len in 0..=max_len {
                out.extend(crate::regular::Nfa::words_of_length(self.alphabet.len(), len).filter(|w| d.accepts(w)));
            }
        }
        let mut queue: VecDeque<Vec<Letter>> = out.iter().cloned().collect();
        while let Some(w) = queue.pop_front() {
            for (l, r) in &self.initial.wraps {
                let next: Vec<Letter> = l.iter().chain(&w).chain(r).copied().collect();
                if next.len() <= max_len && out.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        out
    }

    /// Words reachable from initial words of length at most `max_len`,
    /// keeping only words of length at most `max_len`.
    pub fn reachable_bounded(&self, max_len: usize, node_cap: usize) -> Result<BTreeMap<Vec<Letter>, Option<Vec<Letter>>>, EncodeError> {
        let mut parent: BTreeMap<Vec<Letter>, Option<Vec<Letter>>> =
            self.initial_words(max_len).into_iter().map(|w| (w, None)).collect();
        let mut queue: VecDeque<Vec<Letter>> = parent.keys().cloned().collect();
        while let Some(w) = queue.pop_front() {
            for next in self.successors(&w) {
                if next.len() <= max_len && !parent.contains_key(&next) {
                    if parent.len() >= node_cap {
                        return Err(EncodeError::Unsupported(format!("exploration exceeded {node_cap} words")));
                    }
                    parent.insert(next.clone(), Some(w.clone()));
                    queue.push_back(next);
                }
            }
        }
        Ok(parent)
    }
}

/// Unary predicates defining a regular set: one per live state `s` of the
/// minimal automaton, read as "the word leads to `s`".
struct RegularPredicates {
    /// Predicate name for each state, `None` for states that cannot accept.
    names: Vec<Option<String>>,
    accepting: Vec<String>,
    clauses: Vec<Clause>,
}

fn regular_predicates(dfa: &Dfa, base: &str, letters: &[String], taken: &mut BTreeSet<String>) -> RegularPredicates {
    let n = dfa.num_states();
    // States from which an accepting state is reachable.
    let mut live: Vec<bool> = dfa.accepting.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if !live[s] && dfa.delta[s].iter().any(|&t| live[t]) {
                live[s] = true;
                changed = true;
            }
        }
    }
    let count = live.iter().filter(|&&l| l).count();
    let names: Vec<Option<String>> = (0..n)
        .map(|s| {
            live[s].then(|| {
                let want = if count == 1 { base.to_string() } else { format!("{base}_{s}") };
                let name = fresh_name(&want, taken);
                taken.insert(name.clone());
                name
            })
        })
        .collect();
    let x = var("x");
    let mut clauses = Vec::new();
    if let Some(init) = &names[dfa.initial] {
        clauses.push(Clause::fact(rel1(init, Term::constant(UNIT))));
    }
    for s in 0..n {
        for (a, &t) in dfa.delta[s].iter().enumerate() {
            if let (Some(from), Some(to)) = (&names[s], &names[t]) {
                clauses.push(Clause::implication(
                    vec![rel1(from, x.clone())],
                    Some(rel1(to, super::star(x.clone(), Term::constant(&letters[a])))),
                ));
            }
        }
    }
    let accepting = (0..n).filter(|&s| dfa.accepting[s]).filter_map(|s| names[s].clone()).collect();
    RegularPredicates { names, accepting, clauses }
}

fn pattern_term(p: &[PatternItem], letters: &[String]) -> Term {
    word_term(p.iter().map(|i| match i {
        PatternItem::Letter(a) => Term::constant(&letters[*a]),
        PatternItem::Var(v) => Term::var(v),
    }))
}

/// Encodes a string rewriting system: `R` holds of every reachable word.
///
/// A rule `lhs -> rhs` becomes `C(x) ∧ ... ∧ R(t_lhs) → R(t_rhs)`, where each
/// constrained variable gets a predicate for its regular set; constraints
/// that admit every word are dropped.
pub fn encode_rewriting(rw: &RewriteSystem) -> Result<EncodedProblem, EncodeError> {
    rw.validate()?;
    let mut taken: BTreeSet<String> = [UNIT, STAR, REACH].into_iter().map(String::from).collect();
    let mut notes = Vec::new();
    let mut letters = Vec::new();
    for a in &rw.alphabet {
        let name = fresh_name(a, &taken);
        if &name != a {
            notes.push(format!("letter `{a}` is the constant `{name}`"));
        }
        taken.insert(name.clone());
        letters.push(name);
    }

    // Distinct non-trivial constraints, in order of first use.
    let mut distinct: Vec<Regex> = Vec::new();
    for r in &rw.rules {
        for (_, _, re) in &r.constraints {
            if !re.is_universal_star(rw.alphabet.len()) && !distinct.contains(re) {
                let d = minimal_dfa(&re.to_nfa(&rw.alphabet));
                if d.accepting.iter().all(|&a| a) {
                    continue;
                }
                distinct.push(re.clone());
            }
        }
    }
    let mut preds: Vec<(Regex, RegularPredicates)> = Vec::new();
    for (k, re) in distinct.into_iter().enumerate() {
        let dfa = minimal_dfa(&re.to_nfa(&rw.alphabet));
        let rp = regular_predicates(&dfa, &format!("C{}", k + 1), &letters, &mut taken);
        preds.push((re, rp));
    }
    let init_preds = rw.initial.regular.as_ref().map(|(_, re)| {
        let dfa = minimal_dfa(&re.to_nfa(&rw.alphabet));
        regular_predicates(&dfa, "I", &letters, &mut taken)
    });

    let mut vocab = Vocabulary::new();
    vocab.add_constant(UNIT);
    for l in &letters {
        vocab.add_constant(l.clone());
    }
    vocab.add_function(STAR, 2);
    vocab.add_relation(REACH, 1);
    for rp in preds.iter().map(|(_, rp)| rp).chain(&init_preds) {
        for n in rp.names.iter().flatten() {
            vocab.add_relation(n.clone(), 1);
        }
    }

    let mut p = EncodedProblem::new(vocab, letters.clone());
    p.notes = notes;
    monoid_axioms(&mut p, true);

    for (k, (_, rp)) in preds.iter().enumerate() {
        for c in &rp.clauses {
            p.push(format!("constraint C{}", k + 1), c.clone());
        }
    }
    if let Some(rp) = &init_preds {
        for c in &rp.clauses {
            p.push("initial set: automaton", c.clone());
        }
        for acc in &rp.accepting {
            p.push("initial set: accept", Clause::implication(vec![rel1(acc, var("x"))], Some(rel1(REACH, var("x")))));
        }
    }
    for s in &rw.initial.seeds {
        p.push("initial set: seed", Clause::fact(rel1(REACH, pattern_term(&s.iter().map(|&a| PatternItem::Letter(a)).collect::<Vec<_>>(), &letters))));
    }
    for (l, r) in &rw.initial.wraps {
        let items: Vec<Term> = l
            .iter()
            .map(|&a| Term::constant(&letters[a]))
            .chain([var("x")])
            .chain(r.iter().map(|&a| Term::constant(&letters[a])))
            .collect();
        p.push("initial set: wrap", Clause::implication(vec![rel1(REACH, var("x"))], Some(rel1(REACH, word_term(items)))));
    }

    for (k, rule) in rw.rules.iter().enumerate() {
        let tag = match &rule.name {
            Some(n) => format!("rule {}: {n}", k + 1),
            None => format!("rule {}", k + 1),
        };
        // One clause per choice of accepting state for each constrained variable.
        let mut bodies: Vec<Vec<Atom>> = vec![Vec::new()];
        for v in pattern_vars(&rule.lhs) {
            let Some(re) = rule.constraint(v) else { continue };
            let Some((_, rp)) = preds.iter().find(|(r, _)| r == re) else { continue };
            bodies = bodies
                .into_iter()
                .flat_map(|b| {
                    rp.accepting.iter().map(move |acc| {
                        let mut b = b.clone();
                        b.push(rel1(acc, var(v)));
                        b
                    })
                })
                .collect();
        }
        for mut body in bodies {
            body.push(rel1(REACH, pattern_term(&rule.lhs, &letters)));
            p.push(tag.clone(), Clause::implication(body, Some(rel1(REACH, pattern_term(&rule.rhs, &letters)))));
        }
    }

    p.goal = GoalFormula::new(rw.bad.iter().map(|b| vec![rel1(REACH, pattern_term(b, &letters))]).collect());
    p.validate()?;
    p.rename_clashing_vars();
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits() -> Vec<String> {
        vec!["0".into(), "1".into()]
    }

    fn v(n: &str) -> PatternItem {
        PatternItem::Var(n.into())
    }

    fn l(a: Letter) -> PatternItem {
        PatternItem::Letter(a)
    }

    fn rule(lhs: Vec<PatternItem>, rhs: Vec<PatternItem>, cs: &[(&str, &str)]) -> RewriteRule {
        RewriteRule {
            name: None,
            lhs,
            rhs,
            constraints: cs.iter().map(|(x, s)| (x.to_string(), s.to_string(), Regex::parse(s, &bits()).unwrap())).collect(),
        }
    }

    fn paterson_minus() -> RewriteSystem {
        RewriteSystem {
            name: "paterson-minus".into(),
            alphabet: bits(),
            rules: vec![
                rule(vec![v("x"), l(0), l(1), v("y")], vec![v("x"), l(1), l(0), v("y")], &[("x", "0*"), ("y", "(1+0)*")]),
                rule(vec![v("x"), l(1), l(0), l(1), v("y")], vec![v("x"), l(1), l(1), l(0), v("y")], &[("x", "(1+0)*"), ("y", "1*")]),
                rule(vec![v("x"), l(0)], vec![l(0), v("x")], &[("x", "(1+0)*")]),
            ],
            initial: InitialSet { seeds: vec![vec![]], wraps: vec![(vec![0], vec![1])], regular: None },
            bad: vec![vec![v("x"), l(0), l(0)]],
        }
    }

    #[test]
    fn paterson_minus_encoding_shape() {
        let p = encode_rewriting(&paterson_minus()).unwrap();
        assert_eq!(p.count_family("constraint C1"), 2);
        assert_eq!(p.count_family("constraint C2"), 2);
        assert_eq!(p.count_family("rule"), 3);
        let texts: Vec<String> = p.axioms.iter().map(|c| c.to_string()).collect();
        assert!(texts.contains(&"~C1(x) | ~R(((x * 0) * 1) * y) | R(((x * 1) * 0) * y)".to_string()), "{texts:#?}");
        assert!(texts.contains(&"~R(x * 0) | R(0 * x)".to_string()));
        assert!(texts.contains(&"R(e)".to_string()));
        assert!(texts.contains(&"~R(x) | R((0 * x) * 1)".to_string()));
        assert_eq!(p.goal.disjuncts[0][0].to_string(), "R((x * 0) * 0)");
    }

    #[test]
    fn seeds_and_rules() {
        let rw = paterson_minus();
        let init = rw.initial_words(4);
        assert_eq!(init, BTreeSet::from([vec![], vec![0, 1], vec![0, 0, 1, 1]]));
        assert_eq!(rw.successors(&[0, 1]), BTreeSet::from([vec![1, 0]]));
        assert!(rw.is_bad(&[1, 0, 0]));
        assert!(!rw.is_bad(&[0, 1, 0]));
    }

    #[test]
    fn universal_constraints_emit_nothing() {
        let rw = RewriteSystem {
            rules: vec![rule(vec![v("x"), l(0), v("y")], vec![v("x"), l(1), v("y")], &[("x", "(0+1)*"), ("y", "(1+0)*")])],
            ..paterson_minus()
        };
        let p = encode_rewriting(&rw).unwrap();
        assert_eq!(p.count_family("constraint"), 0);
        assert_eq!(p.axioms[p.axioms.len() - 1].to_string(), "~R((x * 0) * y) | R((x * 1) * y)");
    }
}
