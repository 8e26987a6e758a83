use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::system::StateId;

/// Is `u` a (not necessarily contiguous) subword of `v`?
pub fn subword(u: &[StateId], v: &[StateId]) -> bool {
    let mut rest = v.iter();
    u.iter().all(|a| rest.any(|b| a == b))
}

fn length_lex(a: &[StateId], b: &[StateId]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// An upward-closed set of configurations, represented by its minimal
/// generators. Generators are pairwise incomparable and sorted by length,
/// then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpwardClosedSet {
    generators: Vec<Vec<StateId>>,
}

impl UpwardClosedSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generators(&self) -> &[Vec<StateId>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, word: &[StateId]) -> bool {
        self.generators.iter().any(|g| subword(g, word))
    }

    /// Adds the words and re-minimizes.
    pub fn union(&self, words: impl IntoIterator<Item = Vec<StateId>>) -> UpwardClosedSet {
        minimize_antichain(self.generators.iter().cloned().chain(words))
    }

    /// Denotation inclusion, decided on generators.
    pub fn is_subset(&self, other: &UpwardClosedSet) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }
}

/// Keeps exactly the minimal elements under the subword order.
pub fn minimize_antichain(words: impl IntoIterator<Item = Vec<StateId>>) -> UpwardClosedSet {
    let mut words: Vec<Vec<StateId>> = words.into_iter().collect();
    words.sort_by(|a, b| length_lex(a, b));
    words.dedup();
    // Shorter words come first, so a word is minimal iff no kept word embeds into it.
    let mut kept: Vec<Vec<StateId>> = Vec::new();
    for w in words {
        if !kept.iter().any(|k| subword(k, &w)) {
            kept.push(w);
        }
    }
    UpwardClosedSet { generators: kept }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subword_basics() {
        assert!(subword(&[], &[3, 1]));
        // red·red into green·red·blue·red with green=0, black=1, blue=2, red=3
        assert!(subword(&[3, 3], &[0, 3, 2, 3]));
        assert!(!subword(&[3, 3], &[0, 3, 0]));
        assert!(!subword(&[1], &[]));
    }

    #[test]
    fn minimize_examples() {
        let u = minimize_antichain(vec![vec![3, 3], vec![0, 3, 3]]);
        assert_eq!(u.generators(), &[vec![3, 3]]);
        let u = minimize_antichain(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(u.generators(), &[vec![0, 1], vec![1, 0]]);
    }
}
