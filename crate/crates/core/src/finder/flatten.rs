//! Flattening clauses into shallow literals over cell variables.
//!
//! Every non-variable subterm `f(s1, .., sk)` is named by a variable `v` and
//! the literal `f(v1, .., vk) != v` is added, so that each remaining literal
//! mentions at most one table cell. Negative equalities between variables are
//! removed by substitution and a definition used only in one positive
//! equality is folded into a positive cell literal.

use std::collections::HashMap;

use crate::logic::{Atom, Clause, Term, Vocabulary};

use super::FinderError;

/// Symbols of a problem, indexed in a fixed order. Relations past
/// `real_relations` are introduced by clause splitting.
#[derive(Clone, Debug, Default)]
pub(crate) struct Signature {
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub relations: Vec<(String, usize)>,
    pub real_relations: usize,
}

impl Signature {
    pub(crate) fn new(vocab: Option<&Vocabulary>, clauses: &[&Clause]) -> Result<Signature, FinderError> {
        let mut sig = Signature::default();
        if let Some(v) = vocab {
            v.validate()?;
            sig.constants = v.constants.clone();
            sig.functions = v.functions.iter().map(|f| (f.name.clone(), f.arity)).collect();
            sig.relations = v.relations.iter().map(|r| (r.name.clone(), r.arity)).collect();
        }
        for c in clauses {
            for l in &c.literals {
                match &l.atom {
                    Atom::Rel(r, args) => {
                        sig.note_relation(r, args.len())?;
                        args.iter().try_for_each(|t| sig.note_term(t))?;
                    }
                    Atom::Eq(s, t) => {
                        sig.note_term(s)?;
                        sig.note_term(t)?;
                    }
                }
            }
        }
        sig.real_relations = sig.relations.len();
        Ok(sig)
    }

    fn clash(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
            || self.functions.iter().any(|(f, _)| f == name)
            || self.relations.iter().any(|(r, _)| r == name)
    }

    fn note_relation(&mut self, name: &str, arity: usize) -> Result<(), FinderError> {
        match self.relations.iter().find(|(r, _)| r == name) {
            Some(&(_, a)) if a == arity => Ok(()),
            Some(&(_, a)) => Err(FinderError::Signature(format!("`{name}` used with arities {a} and {arity}"))),
            None if self.clash(name) => Err(FinderError::Signature(format!("`{name}` used as a relation and a term"))),
            None => {
                self.relations.push((name.to_string(), arity));
                Ok(())
            }
        }
    }

    fn note_term(&mut self, t: &Term) -> Result<(), FinderError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if self.constants.contains(c) {
                    Ok(())
                } else if self.clash(c) {
                    Err(FinderError::Signature(format!("`{c}` used as a constant and another symbol")))
                } else {
                    self.constants.push(c.clone());
                    Ok(())
                }
            }
            Term::App(f, args) => {
                match self.functions.iter().find(|(g, _)| g == f) {
                    Some(&(_, a)) if a == args.len() => {}
                    Some(&(_, a)) => {
                        return Err(FinderError::Signature(format!("`{f}` used with arities {a} and {}", args.len())))
                    }
                    None if self.clash(f) => {
                        return Err(FinderError::Signature(format!("`{f}` used as a function and another symbol")))
                    }
                    None => self.functions.push((f.clone(), args.len())),
                }
                args.iter().try_for_each(|a| self.note_term(a))
            }
        }
    }

    fn constant(&self, name: &str) -> usize {
        self.constants.iter().position(|c| c == name).expect("signature covers the clauses")
    }

    fn function(&self, name: &str) -> usize {
        self.functions.iter().position(|(f, _)| f == name).expect("signature covers the clauses")
    }

    fn relation(&self, name: &str) -> usize {
        self.relations.iter().position(|(r, _)| r == name).expect("signature covers the clauses")
    }

    pub(crate) fn add_split_relation(&mut self, arity: usize) -> usize {
        let idx = self.relations.len();
        self.relations.push((format!("$split{}", idx - self.real_relations), arity));
        idx
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum FlatLit {
    Rel { rel: usize, args: Vec<u32>, positive: bool },
    /// `f(args) = res`
    Fun { fun: usize, args: Vec<u32>, res: u32, positive: bool },
    /// `c = var`
    Const { constant: usize, var: u32, positive: bool },
    Eq { a: u32, b: u32, positive: bool },
}

impl FlatLit {
    pub(crate) fn vars(&self) -> Vec<u32> {
        match self {
            FlatLit::Rel { args, .. } => args.clone(),
            FlatLit::Fun { args, res, .. } => {
                let mut v = args.clone();
                v.push(*res);
                v
            }
            FlatLit::Const { var, .. } => vec![*var],
            FlatLit::Eq { a, b, .. } => vec![*a, *b],
        }
    }

    fn map_vars(&self, f: &impl Fn(u32) -> u32) -> FlatLit {
        match self {
            FlatLit::Rel { rel, args, positive } => {
                FlatLit::Rel { rel: *rel, args: args.iter().map(|&v| f(v)).collect(), positive: *positive }
            }
            FlatLit::Fun { fun, args, res, positive } => FlatLit::Fun {
                fun: *fun,
                args: args.iter().map(|&v| f(v)).collect(),
                res: f(*res),
                positive: *positive,
            },
            FlatLit::Const { constant, var, positive } => {
                FlatLit::Const { constant: *constant, var: f(*var), positive: *positive }
            }
            FlatLit::Eq { a, b, positive } => FlatLit::Eq { a: f(*a), b: f(*b), positive: *positive },
        }
    }

    fn var_mask(&self) -> u64 {
        self.vars().iter().fold(0, |m, &v| m | 1 << v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FlatClause {
    pub num_vars: usize,
    pub lits: Vec<FlatLit>,
}

impl FlatClause {
    /// Number of ground instances over a domain of `size` elements.
    pub(crate) fn instances(&self, size: usize) -> u128 {
        (size as u128).pow(self.num_vars as u32)
    }
}

struct Flattener<'s> {
    sig: &'s Signature,
    vars: HashMap<String, u32>,
    terms: HashMap<Term, u32>,
    defs: Vec<FlatLit>,
    next: u32,
}

impl Flattener<'_> {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next - 1
    }

    fn term(&mut self, t: &Term) -> u32 {
        if let Term::Var(name) = t {
            if let Some(&v) = self.vars.get(name) {
                return v;
            }
            let v = self.fresh();
            self.vars.insert(name.clone(), v);
            return v;
        }
        if let Some(&v) = self.terms.get(t) {
            return v;
        }
        let def = match t {
            Term::Const(c) => {
                let v = self.fresh();
                FlatLit::Const { constant: self.sig.constant(c), var: v, positive: false }
            }
            Term::App(f, args) => {
                let args: Vec<u32> = args.iter().map(|a| self.term(a)).collect();
                let v = self.fresh();
                FlatLit::Fun { fun: self.sig.function(f), args, res: v, positive: false }
            }
            Term::Var(_) => unreachable!(),
        };
        let v = def.vars().last().copied().unwrap();
        self.defs.push(def);
        self.terms.insert(t.clone(), v);
        v
    }
}

fn find(parent: &mut [u32], v: u32) -> u32 {
    let mut r = v;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut x = v;
    while parent[x as usize] != r {
        let next = parent[x as usize];
        parent[x as usize] = r;
        x = next;
    }
    r
}

/// Flattens a clause; `None` when it is a tautology.
pub(crate) fn flatten(clause: &Clause, sig: &Signature) -> Option<FlatClause> {
    let mut fl = Flattener { sig, vars: HashMap::new(), terms: HashMap::new(), defs: Vec::new(), next: 0 };
    let mut lits = Vec::new();
    for l in &clause.literals {
        lits.push(match &l.atom {
            Atom::Rel(r, args) => FlatLit::Rel {
                rel: sig.relation(r),
                args: args.iter().map(|a| fl.term(a)).collect(),
                positive: l.positive,
            },
            Atom::Eq(s, t) => FlatLit::Eq { a: fl.term(s), b: fl.term(t), positive: l.positive },
        });
    }
    let n = fl.next;
    lits.extend(fl.defs);
    simplify(lits, n)
}

/// Substitution of negative equalities and of equal definitions, folding of
/// single-use definitions into positive equalities, then renumbering.
pub(crate) fn simplify(mut lits: Vec<FlatLit>, num_vars: u32) -> Option<FlatClause> {
    let mut parent: Vec<u32> = (0..num_vars).collect();
    loop {
        let mut changed = false;
        let merge = |a: u32, b: u32, parent: &mut Vec<u32>| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
                true
            } else {
                false
            }
        };
        for l in &lits {
            if let FlatLit::Eq { a, b, positive: false } = l {
                changed |= merge(*a, *b, &mut parent);
            }
        }
        let roots: Vec<u32> = (0..num_vars).map(|v| find(&mut parent, v)).collect();
        let canon: Vec<FlatLit> = lits.iter().map(|l| l.map_vars(&|v| roots[v as usize])).collect();
        let mut seen: HashMap<(u8, usize, Vec<u32>), u32> = HashMap::new();
        for l in &canon {
            let key = match l {
                FlatLit::Fun { fun, args, res, positive: false } => Some(((0, *fun, args.clone()), *res)),
                FlatLit::Const { constant, var, positive: false } => Some(((1, *constant, Vec::new()), *var)),
                _ => None,
            };
            if let Some((k, r)) = key {
                match seen.get(&k) {
                    Some(&other) => changed |= merge(other, r, &mut parent),
                    None => {
                        seen.insert(k, r);
                    }
                }
            }
        }
        let roots: Vec<u32> = (0..num_vars).map(|v| find(&mut parent, v)).collect();
        lits = lits.iter().map(|l| l.map_vars(&|v| roots[v as usize])).collect();
        if !changed {
            break;
        }
    }

    let mut out = Vec::with_capacity(lits.len());
    for l in lits {
        match l {
            FlatLit::Eq { a, b, positive } if a == b => {
                if positive {
                    return None;
                }
            }
            FlatLit::Eq { positive: false, .. } => unreachable!("negative equalities are substituted"),
            other => out.push(other),
        }
    }
    out.sort();
    out.dedup();
    if out.iter().any(|l| out.contains(&negated(l))) {
        return None;
    }

    loop {
        let occurrences =
            |v: u32, lits: &[FlatLit]| lits.iter().map(|l| l.vars().iter().filter(|&&x| x == v).count()).sum::<usize>();
        let mut rewrite = None;
        for (i, l) in out.iter().enumerate() {
            let res = match l {
                FlatLit::Fun { res, positive: false, .. } => *res,
                FlatLit::Const { var, positive: false, .. } => *var,
                _ => continue,
            };
            let uses = occurrences(res, &out);
            if uses == 1 {
                rewrite = Some((i, None));
                break;
            }
            if uses == 2 {
                let eq = out.iter().position(|m| {
                    matches!(m, FlatLit::Eq { a, b, positive: true } if (*a == res) != (*b == res))
                });
                if let Some(j) = eq {
                    let FlatLit::Eq { a, b, .. } = out[j] else { unreachable!() };
                    let target = if a == res { b } else { a };
                    rewrite = Some((i, Some((j, target))));
                    break;
                }
            }
        }
        match rewrite {
            None => break,
            Some((i, None)) => {
                out.remove(i);
            }
            Some((i, Some((j, target)))) => {
                let folded = match &out[i] {
                    FlatLit::Fun { fun, args, .. } => {
                        FlatLit::Fun { fun: *fun, args: args.clone(), res: target, positive: true }
                    }
                    FlatLit::Const { constant, .. } => FlatLit::Const { constant: *constant, var: target, positive: true },
                    _ => unreachable!(),
                };
                let (hi, lo) = (i.max(j), i.min(j));
                out.remove(hi);
                out.remove(lo);
                out.push(folded);
            }
        }
    }

    Some(renumber(out))
}

fn negated(l: &FlatLit) -> FlatLit {
    match l.clone() {
        FlatLit::Rel { rel, args, positive } => FlatLit::Rel { rel, args, positive: !positive },
        FlatLit::Fun { fun, args, res, positive } => FlatLit::Fun { fun, args, res, positive: !positive },
        FlatLit::Const { constant, var, positive } => FlatLit::Const { constant, var, positive: !positive },
        FlatLit::Eq { a, b, positive } => FlatLit::Eq { a, b, positive: !positive },
    }
}

fn renumber(mut lits: Vec<FlatLit>) -> FlatClause {
    let mut map: HashMap<u32, u32> = HashMap::new();
    for l in &lits {
        for v in l.vars() {
            let next = map.len() as u32;
            map.entry(v).or_insert(next);
        }
    }
    lits = lits.iter().map(|l| l.map_vars(&|v| map[&v])).collect();
    lits.sort();
    FlatClause { num_vars: map.len(), lits }
}

const MAX_SPLIT_LITERALS: usize = 16;

/// Splits a clause `A | B` into `A | p(S)` and `B | ~p(S)`, where `S` are the
/// variables shared by `A` and `B` and `p` is a fresh relation, as long as
/// both halves have fewer variables than the whole.
pub(crate) fn split(clause: FlatClause, sig: &mut Signature) -> Vec<FlatClause> {
    let k = clause.num_vars;
    let m = clause.lits.len();
    if k <= 3 || m < 2 || m > MAX_SPLIT_LITERALS || k > 64 {
        return vec![clause];
    }
    let masks: Vec<u64> = clause.lits.iter().map(FlatLit::var_mask).collect();
    let mut best: Option<(usize, usize, u128, u32)> = None;
    for subset in 1..(1u32 << m) - 1 {
        if subset & 1 == 0 {
            continue;
        }
        let (mut a, mut b) = (0u64, 0u64);
        for (i, &mask) in masks.iter().enumerate() {
            if subset >> i & 1 == 1 {
                a |= mask;
            } else {
                b |= mask;
            }
        }
        let (va, vb) = (a.count_ones() as usize, b.count_ones() as usize);
        if va >= k || vb >= k {
            continue;
        }
        let shared = (a & b).count_ones() as usize;
        let cost = 8u128.pow(va as u32) + 8u128.pow(vb as u32) + 8u128.pow(shared as u32);
        let key = (va.max(vb), shared, cost, subset);
        if best.is_none_or(|b| (key.0, key.2, key.1) < (b.0, b.2, b.1)) {
            best = Some(key);
        }
    }
    let Some((_, _, _, subset)) = best else {
        return vec![clause];
    };
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut a, mut b) = (0u64, 0u64);
    for (i, l) in clause.lits.into_iter().enumerate() {
        if subset >> i & 1 == 1 {
            a |= masks[i];
            left.push(l);
        } else {
            b |= masks[i];
            right.push(l);
        }
    }
    let shared: Vec<u32> = (0..64).filter(|&v| (a & b) >> v & 1 == 1).collect();
    let rel = sig.add_split_relation(shared.len());
    left.push(FlatLit::Rel { rel, args: shared.clone(), positive: true });
    right.push(FlatLit::Rel { rel, args: shared, positive: false });
    let mut out = split(renumber(left), sig);
    out.extend(split(renumber(right), sig));
    out
}
