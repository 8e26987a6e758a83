use std::collections::{BTreeMap, BTreeSet};

use super::automata::{Dfa, Letter};

/// A finite monoid given by its operation table, with a letter map `h` and an
/// accepting subset `S` so that a language is recognized as `h⁻¹(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    /// Each element as the state transformation it stands for.
    pub elements: Vec<Vec<usize>>,
    /// `table[a][b] = a ∘ b`: first act by `a`, then by `b`.
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
    pub alphabet: Vec<String>,
    pub letter_map: Vec<usize>,
    pub accepting: BTreeSet<usize>,
}

impl Monoid {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// `h(w)`, the unit for the empty word.
    pub fn eval_word(&self, word: &[Letter]) -> usize {
        word.iter().fold(self.unit, |m, &a| self.table[m][self.letter_map[a]])
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.accepting.contains(&self.eval_word(word))
    }

    /// Exhaustive associativity and unit check.
    pub fn check_laws(&self) -> Result<(), String> {
        let n = self.size();
        for a in 0..n {
            if self.table[self.unit][a] != a || self.table[a][self.unit] != a {
                return Err(format!("{} is not a two-sided unit at {a}", self.unit));
            }
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return Err(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&q| g[q]).collect()
}

/// Transition monoid of a complete DFA: the state transformations induced by
/// words, with `S = {m | m(q0) accepting}`. For a minimal DFA this is the
/// syntactic monoid of its language.
pub fn syntactic_monoid(dfa: &Dfa) -> Monoid {
    let n = dfa.num_states();
    let identity: Vec<usize> = (0..n).collect();
    let letters: Vec<Vec<usize>> =
        (0..dfa.alphabet.len()).map(|a| (0..n).map(|q| dfa.delta[q][a]).collect()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([identity.clone()]);
    let mut frontier = vec![identity.clone()];
    while let Some(f) = frontier.pop() {
        for l in &letters {
            let g = compose(&f, l);
            if seen.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
    let elements: Vec<Vec<usize>> = seen.into_iter().collect();
    let index: BTreeMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let table = elements
        .iter()
        .map(|f| elements.iter().map(|g| index[&compose(f, g)]).collect())
        .collect();
    let unit = index[&identity];
    let letter_map = letters.iter().map(|l| index[l]).collect();
    let accepting = elements
        .iter()
        .enumerate()
        .filter(|(_, f)| dfa.accepting[f[dfa.initial]])
        .map(|(i, _)| i)
        .collect();
    Monoid { elements, table, unit, alphabet: dfa.alphabet.clone(), letter_map, accepting }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::automata::{minimal_dfa, Nfa};

    fn contains_aa() -> Nfa {
        let mut n = Nfa::new(vec!["a".into(), "b".into()], 3);
        for l in 0..2 {
            n.add_transition(0, l, 0);
            n.add_transition(2, l, 2);
        }
        n.add_transition(0, 0, 1);
        n.add_transition(1, 0, 2);
        n.accepting.insert(2);
        n
    }

    #[test]
    fn universal_language_has_trivial_monoid() {
        let m = syntactic_monoid(&minimal_dfa(&Nfa::universal(vec!["a".into()])));
        assert_eq!(m.size(), 1);
        assert_eq!(m.accepting, BTreeSet::from([0]));
    }

    #[test]
    fn contains_aa_monoid_recognizes_language() {
        let d = minimal_dfa(&contains_aa());
        let m = syntactic_monoid(&d);
        m.check_laws().unwrap();
        // States {none, a, aa}: transformations of ε, a, b, ab, ba, aa (and so on) collapse to 6.
        assert_eq!(m.size(), 6);
        for len in 0..=6 {
            for w in Nfa::words_of_length(2, len) {
                assert_eq!(m.accepts(&w), d.accepts(&w), "{w:?}");
            }
        }
    }
}
