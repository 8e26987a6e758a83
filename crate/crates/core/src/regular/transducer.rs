use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::automata::{minimal_dfa, union, Dfa, Letter, Nfa};
use super::RegularError;

/// Letter-to-letter (hence length-preserving) finite transducer.
///
/// General transducers may also read or write the empty word; such pairs are
/// rejected when a transducer is parsed, since the constructions here rely on
/// every transition consuming and producing exactly one letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    pub alphabet: Vec<String>,
    pub state_names: Vec<String>,
    /// `(from, input, output, to)`
    pub transitions: Vec<(usize, Letter, Letter, usize)>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
}

impl Transducer {
    pub fn new(alphabet: Vec<String>, states: usize) -> Self {
        Transducer {
            alphabet,
            state_names: (0..states.max(1)).map(|i| format!("t{i}")).collect(),
            transitions: Vec::new(),
            initial: 0,
            accepting: BTreeSet::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn add_transition(&mut self, from: usize, input: Letter, output: Letter, to: usize) {
        self.transitions.push((from, input, output, to));
    }

    pub fn validate(&self) -> Result<(), RegularError> {
        let n = self.num_states();
        let k = self.alphabet.len();
        if self.initial >= n || self.accepting.iter().any(|&s| s >= n) {
            return Err(RegularError::Malformed("state index out of range".into()));
        }
        if self.transitions.iter().any(|&(p, a, b, q)| p >= n || q >= n || a >= k || b >= k) {
            return Err(RegularError::Malformed("transition out of range".into()));
        }
        Ok(())
    }

    /// Is `(input, output)` in the relation of the transducer?
    pub fn relates(&self, input: &[Letter], output: &[Letter]) -> bool {
        if input.len() != output.len() {
            return false;
        }
        let mut current = BTreeSet::from([self.initial]);
        for (&a, &b) in input.iter().zip(output) {
            current = self
                .transitions
                .iter()
                .filter(|&&(p, x, y, _)| x == a && y == b && current.contains(&p))
                .map(|&(_, _, _, q)| q)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    pub fn reindex(&self, alphabet: &[String]) -> Result<Transducer, RegularError> {
        let map: Vec<Letter> = self
            .alphabet
            .iter()
            .map(|a| alphabet.iter().position(|b| b == a).ok_or_else(|| RegularError::UnknownLetter(a.clone())))
            .collect::<Result<_, _>>()?;
        Ok(Transducer {
            alphabet: alphabet.to_vec(),
            state_names: self.state_names.clone(),
            transitions: self.transitions.iter().map(|&(p, a, b, q)| (p, map[a], map[b], q)).collect(),
            initial: self.initial,
            accepting: self.accepting.clone(),
        })
    }

    /// Identity relation on all words.
    pub fn identity(alphabet: Vec<String>) -> Transducer {
        let mut t = Transducer::new(alphabet, 1);
        for a in 0..t.alphabet.len() {
            t.add_transition(0, a, a, 0);
        }
        t.accepting.insert(0);
        t
    }
}

/// `{u | exists w in L, (w, u) in r_tau}` by a product over automaton and
/// transducer states, reading the output track.
pub fn image(tau: &Transducer, lang: &Nfa) -> Result<Nfa, RegularError> {
    if tau.alphabet != lang.alphabet {
        return Err(RegularError::AlphabetMismatch { left: tau.alphabet.clone(), right: lang.alphabet.clone() });
    }
    let mut by_input: Vec<Vec<(usize, Letter, usize)>> = vec![Vec::new(); tau.num_states()];
    for &(p, a, b, q) in &tau.transitions {
        by_input[p].push((a, b, q));
    }
    let mut lang_succ: BTreeMap<(usize, Letter), Vec<usize>> = BTreeMap::new();
    for &(p, a, q) in &lang.transitions {
        lang_succ.entry((p, a)).or_default().push(q);
    }
    let mut out = Nfa { alphabet: lang.alphabet.clone(), state_names: Vec::new(), transitions: Vec::new(), initial: 0, accepting: BTreeSet::new() };
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let start = (lang.initial, tau.initial);
    index.insert(start, 0);
    out.state_names.push(format!("({},{})", lang.state_names[start.0], tau.state_names[start.1]));
    let mut queue = VecDeque::from([start]);
    while let Some((s, t)) = queue.pop_front() {
        let id = index[&(s, t)];
        if lang.accepting.contains(&s) && tau.accepting.contains(&t) {
            out.accepting.insert(id);
        }
        for &(a, b, t2) in &by_input[t] {
            for &s2 in lang_succ.get(&(s, a)).map(Vec::as_slice).unwrap_or(&[]) {
                let target = *index.entry((s2, t2)).or_insert_with(|| {
                    out.state_names.push(format!("({},{})", lang.state_names[s2], tau.state_names[t2]));
                    queue.push_back((s2, t2));
                    out.state_names.len() - 1
                });
                out.transitions.push((id, b, target));
            }
        }
    }
    out.transitions.sort_unstable();
    out.transitions.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForwardOutcome {
    /// `R` contains the initial set and is closed under the transducer.
    Fixpoint { language: Dfa, iterations: usize },
    NoConvergence { iterations: usize },
}

/// `L_0 = init`, `L_{i+1} = L_i ∪ tau(L_i)`, compared by minimal automata.
pub fn forward_iterate(tau: &Transducer, init: &Nfa, max_iterations: usize) -> Result<ForwardOutcome, RegularError> {
    let mut current = minimal_dfa(init);
    for i in 1..=max_iterations {
        let as_nfa = current.to_nfa();
        let next = minimal_dfa(&union(&as_nfa, &image(tau, &as_nfa)?)?);
        if next == current {
            return Ok(ForwardOutcome::Fixpoint { language: current, iterations: i });
        }
        current = next;
    }
    Ok(ForwardOutcome::NoConvergence { iterations: max_iterations })
}
