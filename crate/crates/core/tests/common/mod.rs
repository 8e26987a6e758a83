#![allow(dead_code)]

use std::path::PathBuf;

use fcmv::encoder::EncodedProblem;
use fcmv::frontend::{encode_spec, load_spec, SpecFile};

pub fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

pub fn spec(name: &str) -> SpecFile {
    load_spec(&spec_path(&format!("{name}.spec"))).unwrap()
}

pub fn problem(name: &str) -> EncodedProblem {
    encode_spec(&spec(name)).unwrap()
}

use fcmv::logic::{Atom, Clause, FiniteModel, GoalFormula, Literal, RelationTable, Term, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// A model over the tiny vocabulary `a, b, f/2, [g/1], P/1, Q/1`, stored as
/// plain vectors and evaluated without the library.
#[derive(Clone, Debug)]
pub struct Tiny {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub f: Vec<usize>,
    pub g: Option<Vec<usize>>,
    pub p: Vec<bool>,
    pub q: Vec<bool>,
}

pub fn tiny_vocab(with_g: bool) -> Vocabulary {
    let mut v = Vocabulary::new();
    v.add_constant("a").add_constant("b").add_function("f", 2).add_relation("P", 1).add_relation("Q", 1);
    if with_g {
        v.add_function("g", 1);
    }
    v
}

impl Tiny {
    pub fn random(rng: &mut ChaCha8Rng, n: usize, with_g: bool) -> Tiny {
        Tiny {
            n,
            a: rng.gen_range(0..n),
            b: rng.gen_range(0..n),
            f: (0..n * n).map(|_| rng.gen_range(0..n)).collect(),
            g: with_g.then(|| (0..n).map(|_| rng.gen_range(0..n)).collect()),
            p: (0..n).map(|_| rng.gen()).collect(),
            q: (0..n).map(|_| rng.gen()).collect(),
        }
    }

    /// Every interpretation of the vocabulary without `g` over `n` elements.
    pub fn all(n: usize) -> Vec<Tiny> {
        let mut out = Vec::new();
        let cells = n * n;
        for a in 0..n {
            for b in 0..n {
                for fi in 0..n.pow(cells as u32) {
                    let f: Vec<usize> = (0..cells).map(|k| fi / n.pow(k as u32) % n).collect();
                    for pi in 0..1usize << n {
                        for qi in 0..1usize << n {
                            out.push(Tiny {
                                n,
                                a,
                                b,
                                f: f.clone(),
                                g: None,
                                p: (0..n).map(|k| pi >> k & 1 == 1).collect(),
                                q: (0..n).map(|k| qi >> k & 1 == 1).collect(),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_model(&self) -> FiniteModel {
        let mut m = FiniteModel::new(self.n);
        m.set_constant("a", self.a);
        m.set_constant("b", self.b);
        let n = self.n;
        m.set_function("f", 2, |x| self.f[x[0] * n + x[1]]);
        if let Some(g) = &self.g {
            m.set_function("g", 1, |x| g[x[0]]);
        }
        m.set_relation("P", RelationTable::from_fn(1, n, |x| self.p[x[0]]));
        m.set_relation("Q", RelationTable::from_fn(1, n, |x| self.q[x[0]]));
        m
    }

    pub fn term(&self, t: &Term, env: &[usize; 3]) -> usize {
        match t {
            Term::Var(v) => env[VARS.iter().position(|x| x == v).unwrap()],
            Term::Const(c) if c == "a" => self.a,
            Term::Const(_) => self.b,
            Term::App(f, args) if f == "f" => self.f[self.term(&args[0], env) * self.n + self.term(&args[1], env)],
            Term::App(_, args) => self.g.as_ref().unwrap()[self.term(&args[0], env)],
        }
    }

    pub fn atom(&self, a: &Atom, env: &[usize; 3]) -> bool {
        match a {
            Atom::Eq(s, t) => self.term(s, env) == self.term(t, env),
            Atom::Rel(r, args) => {
                let v = self.term(&args[0], env);
                if r == "P" {
                    self.p[v]
                } else {
                    self.q[v]
                }
            }
        }
    }

    pub fn envs(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        (0..n * n * n).map(|i| [i / (n * n), i / n % n, i % n]).collect()
    }

    pub fn clause(&self, c: &Clause) -> bool {
        self.envs().iter().all(|env| c.literals.iter().any(|l| self.atom(&l.atom, env) == l.positive))
    }

    pub fn goal(&self, g: &GoalFormula) -> bool {
        self.envs().iter().any(|env| g.disjuncts.iter().any(|d| d.iter().all(|a| self.atom(a, env))))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_term(rng: &mut ChaCha8Rng, depth: usize, with_g: bool) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    if leaf {
        match rng.gen_range(0..5) {
            0 => Term::constant("a"),
            1 => Term::constant("b"),
            k => Term::var(VARS[k - 2]),
        }
    } else if with_g && rng.gen_bool(0.3) {
        Term::app("g", vec![random_term(rng, depth - 1, with_g)])
    } else {
        Term::app("f", vec![random_term(rng, depth - 1, with_g), random_term(rng, depth - 1, with_g)])
    }
}

pub fn random_atom(rng: &mut ChaCha8Rng, with_g: bool, allow_eq: bool) -> Atom {
    match rng.gen_range(0..if allow_eq { 3 } else { 2 }) {
        0 => Atom::rel("P", vec![random_term(rng, 2, with_g)]),
        1 => Atom::rel("Q", vec![random_term(rng, 2, with_g)]),
        _ => Atom::Eq(random_term(rng, 2, with_g), random_term(rng, 2, with_g)),
    }
}

pub fn random_clause(rng: &mut ChaCha8Rng, with_g: bool) -> Clause {
    let k = rng.gen_range(1..=3);
    Clause::new(
        (0..k)
            .map(|_| {
                let a = random_atom(rng, with_g, true);
                if rng.gen_bool(0.5) {
                    Literal::pos(a)
                } else {
                    Literal::neg(a)
                }
            })
            .collect(),
    )
}

pub fn random_clauses(rng: &mut ChaCha8Rng, with_g: bool) -> Vec<Clause> {
    let k = rng.gen_range(1..=4);
    (0..k).map(|_| random_clause(rng, with_g)).collect()
}

pub fn random_goal(rng: &mut ChaCha8Rng, with_g: bool) -> GoalFormula {
    let d = rng.gen_range(1..=2);
    GoalFormula::new(
        (0..d).map(|_| (0..rng.gen_range(1..=2)).map(|_| random_atom(rng, with_g, false)).collect()).collect(),
    )
}

/// Satisfiability at size `n` by enumerating every interpretation.
pub fn brute_force_sat(clauses: &[Clause], n: usize) -> bool {
    Tiny::all(n).iter().any(|m| clauses.iter().all(|c| m.clause(c)))
}

use fcmv::param::{step, Condition, Context, ParamSystem, TransitionRule, Word};

/// Subword test by dynamic programming, independent of the library.
pub fn subword_dp(u: &[usize], v: &[usize]) -> bool {
    // best[i] = can u[..i] embed into the prefix of v read so far
    let mut best = vec![false; u.len() + 1];
    best[0] = true;
    for &c in v {
        for i in (0..u.len()).rev() {
            if best[i] && u[i] == c {
                best[i + 1] = true;
            }
        }
    }
    best[u.len()]
}

pub fn words_up_to(alphabet: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..alphabet {
                let mut x: Word = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn minimal_words(words: &[Word]) -> std::collections::BTreeSet<Word> {
    words
        .iter()
        .filter(|w| !words.iter().any(|v| v != *w && subword_dp(v, w)))
        .cloned()
        .collect()
}

/// Minimal abstract predecessors of the upward closure of `w`, by
/// enumerating every configuration of length at most `|w| + 2`.
pub fn brute_force_pre(sys: &ParamSystem, w: &[usize]) -> std::collections::BTreeSet<Word> {
    let hits: Vec<Word> = words_up_to(sys.states.len(), w.len() + 2)
        .into_iter()
        .filter(|c| step(sys, c).iter().any(|d| subword_dp(w, d)))
        .collect();
    minimal_words(&hits)
}

pub fn random_system(rng: &mut ChaCha8Rng) -> ParamSystem {
    let q = rng.gen_range(2..=3);
    let states: Vec<String> = (0..q).map(|i| format!("s{i}")).collect();
    let rules = (0..rng.gen_range(1..=4))
        .map(|_| {
            let from = rng.gen_range(0..q);
            let to = rng.gen_range(0..q);
            if rng.gen_bool(0.3) {
                return TransitionRule::unconditional(from, to);
            }
            let context = [Context::L, Context::R, Context::LR][rng.gen_range(0..3)];
            let mut set: Vec<usize> = (0..q).filter(|_| rng.gen_bool(0.5)).collect();
            if set.is_empty() {
                set.push(rng.gen_range(0..q));
            }
            let guard =
                if rng.gen_bool(0.5) { Condition::forall(context, set) } else { Condition::exists(context, set) };
            TransitionRule::guarded(guard, from, to)
        })
        .collect();
    let bad_len = rng.gen_range(1..=2);
    let bad = vec![(0..bad_len).map(|_| rng.gen_range(0..q)).collect()];
    ParamSystem::new("random", states, 0, rules, bad).unwrap()
}
