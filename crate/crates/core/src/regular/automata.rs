use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::RegularError;

pub type Letter = usize;

/// Nondeterministic finite automaton without epsilon moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: Vec<String>,
    pub state_names: Vec<String>,
    /// `(from, letter, to)`
    pub transitions: Vec<(usize, Letter, usize)>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
}

impl Nfa {
    /// An automaton with `states` anonymous states `s0, s1, ..` and no transitions.
    pub fn new(alphabet: Vec<String>, states: usize) -> Self {
        Nfa {
            alphabet,
            state_names: (0..states.max(1)).map(|i| format!("s{i}")).collect(),
            transitions: Vec::new(),
            initial: 0,
            accepting: BTreeSet::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.state_names.push(name.into());
        self.state_names.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, letter: Letter, to: usize) {
        self.transitions.push((from, letter, to));
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn word_from_names(&self, names: &[&str]) -> Result<Vec<Letter>, RegularError> {
        names
            .iter()
            .map(|n| self.letter(n).ok_or_else(|| RegularError::UnknownLetter(n.to_string())))
            .collect()
    }

    pub fn validate(&self) -> Result<(), RegularError> {
        let n = self.num_states();
        if self.initial >= n || self.accepting.iter().any(|&s| s >= n) {
            return Err(RegularError::Malformed("state index out of range".into()));
        }
        if self.transitions.iter().any(|&(p, a, q)| p >= n || q >= n || a >= self.alphabet.len()) {
            return Err(RegularError::Malformed("transition out of range".into()));
        }
        Ok(())
    }

    fn successors(&self) -> Vec<Vec<Vec<usize>>> {
        let mut succ = vec![vec![Vec::new(); self.alphabet.len()]; self.num_states()];
        for &(p, a, q) in &self.transitions {
            if !succ[p][a].contains(&q) {
                succ[p][a].push(q);
            }
        }
        succ
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        let succ = self.successors();
        let mut current = BTreeSet::from([self.initial]);
        for &a in word {
            current = current.iter().flat_map(|&p| succ[p][a].iter().copied()).collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    pub fn is_empty(&self) -> bool {
        let succ = self.successors();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(p) = queue.pop_front() {
            if self.accepting.contains(&p) {
                return false;
            }
            for qs in &succ[p] {
                for &q in qs {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        true
    }

    /// The same language over `alphabet`, which must contain every letter of `self`.
    pub fn reindex(&self, alphabet: &[String]) -> Result<Nfa, RegularError> {
        let map: Vec<Letter> = self
            .alphabet
            .iter()
            .map(|a| alphabet.iter().position(|b| b == a).ok_or_else(|| RegularError::UnknownLetter(a.clone())))
            .collect::<Result<_, _>>()?;
        Ok(Nfa {
            alphabet: alphabet.to_vec(),
            state_names: self.state_names.clone(),
            transitions: self.transitions.iter().map(|&(p, a, q)| (p, map[a], q)).collect(),
            initial: self.initial,
            accepting: self.accepting.clone(),
        })
    }

    /// Universal language over `alphabet`.
    pub fn universal(alphabet: Vec<String>) -> Nfa {
        let mut n = Nfa::new(alphabet, 1);
        for a in 0..n.alphabet.len() {
            n.add_transition(0, a, 0);
        }
        n.accepting.insert(0);
        n
    }

    pub fn empty_language(alphabet: Vec<String>) -> Nfa {
        Nfa::new(alphabet, 1)
    }

    /// All words of length `len`, in lexicographic order.
    pub fn words_of_length(alphabet_size: usize, len: usize) -> impl Iterator<Item = Vec<Letter>> {
        let total = alphabet_size.checked_pow(len as u32).unwrap_or(0);
        let count = if len == 0 { 1 } else { total };
        (0..count).map(move |mut i| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = i % alphabet_size;
                i /= alphabet_size;
            }
            w
        })
    }
}

/// Complete deterministic automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    /// `delta[state][letter]`
    pub delta: Vec<Vec<usize>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn run(&self, from: usize, word: &[Letter]) -> usize {
        word.iter().fold(from, |s, &a| self.delta[s][a])
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.accepting[self.run(self.initial, word)]
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|b| !b).collect(), ..self.clone() }
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone(), self.num_states());
        for (p, row) in self.delta.iter().enumerate() {
            for (a, &q) in row.iter().enumerate() {
                n.add_transition(p, a, q);
            }
        }
        n.initial = self.initial;
        n.accepting = (0..self.num_states()).filter(|&s| self.accepting[s]).collect();
        n
    }

    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !reach.iter().any(|&s| self.accepting[s])
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let p = order[i];
            i += 1;
            for &q in &self.delta[p] {
                if !seen[q] {
                    seen[q] = true;
                    order.push(q);
                }
            }
        }
        order
    }

    /// The minimal complete automaton, numbered in breadth-first order from
    /// the initial state, so equal languages give equal automata.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let k = self.alphabet.len();
        let mut class: BTreeMap<usize, usize> = reach.iter().map(|&s| (s, usize::from(self.accepting[s]))).collect();
        let mut classes = class.values().collect::<BTreeSet<_>>().len();
        loop {
            let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = BTreeMap::new();
            for &s in &reach {
                let sig = (class[&s], (0..k).map(|a| class[&self.delta[s][a]]).collect::<Vec<_>>());
                let fresh = signatures.len();
                let id = *signatures.entry(sig).or_insert(fresh);
                next.insert(s, id);
            }
            let count = signatures.len();
            class = next;
            if count == classes {
                break;
            }
            classes = count;
        }
        // Renumber classes breadth-first from the initial class.
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        for &s in &reach {
            rep.entry(class[&s]).or_insert(s);
        }
        let mut number: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = vec![class[&self.initial]];
        number.insert(class[&self.initial], 0);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for a in 0..k {
                let d = class[&self.delta[rep[&c]][a]];
                if !number.contains_key(&d) {
                    number.insert(d, order.len());
                    order.push(d);
                }
            }
        }
        let delta = order
            .iter()
            .map(|c| (0..k).map(|a| number[&class[&self.delta[rep[c]][a]]]).collect())
            .collect();
        let accepting = order.iter().map(|c| self.accepting[rep[c]]).collect();
        Dfa { alphabet: self.alphabet.clone(), delta, initial: 0, accepting }
    }
}

/// Subset construction; the empty subset becomes the sink.
pub fn determinize(nfa: &Nfa) -> Dfa {
    let succ = nfa.successors();
    let k = nfa.alphabet.len();
    let start = BTreeSet::from([nfa.initial]);
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let current = subsets[i].clone();
        i += 1;
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let target: BTreeSet<usize> = current.iter().flat_map(|&p| succ[p][a].iter().copied()).collect();
            let id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    index.insert(target.clone(), id);
                    subsets.push(target);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
    }
    let accepting = subsets.iter().map(|s| s.iter().any(|q| nfa.accepting.contains(q))).collect();
    Dfa { alphabet: nfa.alphabet.clone(), delta, initial: 0, accepting }
}

pub fn minimal_dfa(nfa: &Nfa) -> Dfa {
    determinize(nfa).minimize()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    Intersection,
    Difference,
}

fn same_alphabet(a: &[String], b: &[String]) -> Result<(), RegularError> {
    if a == b {
        Ok(())
    } else {
        Err(RegularError::AlphabetMismatch { left: a.to_vec(), right: b.to_vec() })
    }
}

fn intersect(a: &Nfa, b: &Nfa) -> Nfa {
    let sa = a.successors();
    let sb = b.successors();
    let k = a.alphabet.len();
    let mut out = Nfa { alphabet: a.alphabet.clone(), state_names: Vec::new(), transitions: Vec::new(), initial: 0, accepting: BTreeSet::new() };
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let start = (a.initial, b.initial);
    index.insert(start, 0);
    out.state_names.push(format!("({},{})", a.state_names[start.0], b.state_names[start.1]));
    queue.push_back(start);
    while let Some((p, q)) = queue.pop_front() {
        let id = index[&(p, q)];
        if a.accepting.contains(&p) && b.accepting.contains(&q) {
            out.accepting.insert(id);
        }
        for l in 0..k {
            for &p2 in &sa[p][l] {
                for &q2 in &sb[q][l] {
                    let target = match index.get(&(p2, q2)) {
                        Some(&t) => t,
                        None => {
                            let t = out.state_names.len();
                            index.insert((p2, q2), t);
                            out.state_names.push(format!("({},{})", a.state_names[p2], b.state_names[q2]));
                            queue.push_back((p2, q2));
                            t
                        }
                    };
                    out.transitions.push((id, l, target));
                }
            }
        }
    }
    out
}

/// `L(a) ∩ L(b)` or `L(a) ∖ L(b)`.
pub fn product(a: &Nfa, b: &Nfa, mode: ProductMode) -> Result<Nfa, RegularError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    Ok(match mode {
        ProductMode::Intersection => intersect(a, b),
        ProductMode::Difference => intersect(a, &determinize(b).complement().to_nfa()),
    })
}

pub fn union(a: &Nfa, b: &Nfa) -> Result<Nfa, RegularError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let off_a = 1;
    let off_b = 1 + a.num_states();
    let mut out = Nfa::new(a.alphabet.clone(), 1);
    out.state_names = vec!["start".into()];
    out.state_names.extend(a.state_names.iter().map(|s| format!("l.{s}")));
    out.state_names.extend(b.state_names.iter().map(|s| format!("r.{s}")));
    for &(p, l, q) in &a.transitions {
        out.add_transition(p + off_a, l, q + off_a);
        if p == a.initial {
            out.add_transition(0, l, q + off_a);
        }
    }
    for &(p, l, q) in &b.transitions {
        out.add_transition(p + off_b, l, q + off_b);
        if p == b.initial {
            out.add_transition(0, l, q + off_b);
        }
    }
    out.accepting.extend(a.accepting.iter().map(|s| s + off_a));
    out.accepting.extend(b.accepting.iter().map(|s| s + off_b));
    if a.accepting.contains(&a.initial) || b.accepting.contains(&b.initial) {
        out.accepting.insert(0);
    }
    Ok(out)
}

pub fn is_subset(a: &Nfa, b: &Nfa) -> Result<bool, RegularError> {
    Ok(product(a, b, ProductMode::Difference)?.is_empty())
}

pub fn language_equal(a: &Nfa, b: &Nfa) -> Result<bool, RegularError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    Ok(minimal_dfa(a) == minimal_dfa(b))
}

/// Upward closure of the generators under the subword order: one chain per
/// generator with self-loops on every letter, sharing the initial state.
pub fn upward_closure_nfa(generators: &[Vec<Letter>], alphabet: Vec<String>) -> Nfa {
    let k = alphabet.len();
    let mut nfa = Nfa::new(alphabet, 1);
    nfa.state_names = vec!["start".into()];
    for a in 0..k {
        nfa.add_transition(0, a, 0);
    }
    for (g, word) in generators.iter().enumerate() {
        let mut prev = 0;
        for (i, &letter) in word.iter().enumerate() {
            let s = nfa.add_state(format!("g{g}.{}", i + 1));
            nfa.add_transition(prev, letter, s);
            for a in 0..k {
                nfa.add_transition(s, a, s);
            }
            prev = s;
        }
        nfa.accepting.insert(prev);
    }
    nfa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn star_of_single_letter() {
        let mut n = Nfa::new(vec!["q0".into(), "q1".into()], 1);
        n.add_transition(0, 0, 0);
        n.accepting.insert(0);
        assert!(n.accepts(&[0, 0, 0]));
        assert!(!n.accepts(&[0, 1]));
        assert!(n.accepts(&[]));
    }

    #[test]
    fn upward_closure_membership() {
        // alphabet green, red, blue
        let alphabet: Vec<String> = ["green", "red", "blue"].map(String::from).to_vec();
        let n = upward_closure_nfa(&[vec![1, 1]], alphabet.clone());
        assert!(n.accepts(&[0, 1, 2, 1]));
        assert!(!n.accepts(&[0, 1, 0]));
        let all = upward_closure_nfa(&[vec![]], alphabet.clone());
        assert!(all.accepts(&[]) && all.accepts(&[2, 2, 0]));
        assert!(upward_closure_nfa(&[], alphabet).is_empty());
    }

    #[test]
    fn minimal_dfa_is_canonical() {
        // Two different automata for "ends with a".
        let mut x = Nfa::new(ab(), 2);
        x.add_transition(0, 0, 0);
        x.add_transition(0, 1, 0);
        x.add_transition(0, 0, 1);
        x.accepting.insert(1);
        let mut y = Nfa::new(ab(), 2);
        y.add_transition(0, 0, 1);
        y.add_transition(0, 1, 0);
        y.add_transition(1, 0, 1);
        y.add_transition(1, 1, 0);
        y.accepting.insert(1);
        assert!(language_equal(&x, &y).unwrap());
        assert_eq!(minimal_dfa(&x).num_states(), 2);
    }

    #[test]
    fn product_requires_same_alphabet() {
        let x = Nfa::universal(ab());
        let y = Nfa::universal(vec!["a".into()]);
        assert!(matches!(product(&x, &y, ProductMode::Intersection), Err(RegularError::AlphabetMismatch { .. })));
    }

    #[test]
    fn union_accepts_both() {
        let mut only_a = Nfa::new(ab(), 2);
        only_a.add_transition(0, 0, 1);
        only_a.accepting.insert(1);
        let mut only_b = Nfa::new(ab(), 2);
        only_b.add_transition(0, 1, 1);
        only_b.accepting.insert(1);
        let u = union(&only_a, &only_b).unwrap();
        assert!(u.accepts(&[0]) && u.accepts(&[1]) && !u.accepts(&[]) && !u.accepts(&[0, 1]));
    }
}
