//! Ground instances of flat clauses as boolean clauses over table cells.
//!
//! A constant or function cell with `n` possible values owns `n` boolean
//! variables, exactly one of which is true; a relation tuple owns one.

use super::flatten::{FlatClause, FlatLit, Signature};
use super::sat::{Lit, Solver, Var};

pub(crate) struct Layout {
    pub size: usize,
    const_base: Vec<Var>,
    fun_base: Vec<Var>,
    fun_arity: Vec<usize>,
    rel_base: Vec<Var>,
    rel_arity: Vec<usize>,
    pub num_vars: usize,
}

impl Layout {
    pub(crate) fn new(sig: &Signature, size: usize) -> Layout {
        let mut next = 0usize;
        let mut alloc = |count: usize| {
            next += count;
            (next - count) as Var
        };
        let const_base = sig.constants.iter().map(|_| alloc(size)).collect();
        let fun_base = sig.functions.iter().map(|(_, a)| alloc(size.pow(*a as u32) * size)).collect();
        let rel_base = sig.relations.iter().map(|(_, a)| alloc(size.pow(*a as u32))).collect();
        Layout {
            size,
            const_base,
            fun_base,
            fun_arity: sig.functions.iter().map(|(_, a)| *a).collect(),
            rel_base,
            rel_arity: sig.relations.iter().map(|(_, a)| *a).collect(),
            num_vars: next,
        }
    }

    pub(crate) fn const_var(&self, c: usize, value: usize) -> Var {
        self.const_base[c] + value as Var
    }

    pub(crate) fn cell_var(&self, f: usize, cell: usize, value: usize) -> Var {
        self.fun_base[f] + (cell * self.size + value) as Var
    }

    pub(crate) fn rel_var(&self, r: usize, index: usize) -> Var {
        self.rel_base[r] + index as Var
    }

    pub(crate) fn cells(&self, f: usize) -> usize {
        self.size.pow(self.fun_arity[f] as u32)
    }

    pub(crate) fn tuples(&self, r: usize) -> usize {
        self.size.pow(self.rel_arity[r] as u32)
    }

    /// Exactly-one constraints for every constant and function cell.
    pub(crate) fn cell_constraints(&self, mut emit: impl FnMut(&[Lit])) -> usize {
        let mut count = 0;
        let mut one_of = |base: Var| {
            let lits: Vec<Lit> = (0..self.size).map(|v| Lit::new(base + v as Var, true)).collect();
            emit(&lits);
            count += 1;
            for a in 0..self.size {
                for b in a + 1..self.size {
                    emit(&[!lits[a], !lits[b]]);
                    count += 1;
                }
            }
        };
        for &base in &self.const_base {
            one_of(base);
        }
        for f in 0..self.fun_base.len() {
            for cell in 0..self.cells(f) {
                one_of(self.cell_var(f, cell, 0));
            }
        }
        count
    }

    /// Least-number symmetry breaking over the constants in order: a constant
    /// takes a value `v > 0` only if an earlier constant takes `v - 1`.
    pub(crate) fn symmetry_constraints(&self, mut emit: impl FnMut(&[Lit])) -> usize {
        let mut count = 0;
        for i in 0..self.const_base.len() {
            for v in 1..self.size {
                if v > i {
                    emit(&[Lit::new(self.const_var(i, v), false)]);
                } else {
                    let mut c = vec![Lit::new(self.const_var(i, v), false)];
                    c.extend((0..i).map(|j| Lit::new(self.const_var(j, v - 1), true)));
                    emit(&c);
                }
                count += 1;
            }
        }
        count
    }

    /// The boolean clause for `clause` under `env`; false when the instance
    /// is satisfied by every interpretation with functional cells.
    pub(crate) fn instance(&self, clause: &FlatClause, env: &[usize], out: &mut Vec<Lit>) -> bool {
        out.clear();
        let mut negative_cells: Vec<(Var, Var)> = Vec::new();
        for l in &clause.lits {
            match l {
                FlatLit::Eq { a, b, positive } => {
                    if (env[*a as usize] == env[*b as usize]) == *positive {
                        return false;
                    }
                }
                FlatLit::Rel { rel, args, positive } => {
                    let idx = args.iter().fold(0, |acc, &v| acc * self.size + env[v as usize]);
                    out.push(Lit::new(self.rel_var(*rel, idx), *positive));
                }
                FlatLit::Fun { fun, args, res, positive } => {
                    let cell = args.iter().fold(0, |acc, &v| acc * self.size + env[v as usize]);
                    let var = self.cell_var(*fun, cell, env[*res as usize]);
                    if !positive {
                        let base = self.cell_var(*fun, cell, 0);
                        if negative_cells.iter().any(|&(b, v)| b == base && v != var) {
                            return false;
                        }
                        negative_cells.push((base, var));
                    }
                    out.push(Lit::new(var, *positive));
                }
                FlatLit::Const { constant, var, positive } => {
                    let v = self.const_var(*constant, env[*var as usize]);
                    if !positive {
                        let base = self.const_var(*constant, 0);
                        if negative_cells.iter().any(|&(b, w)| b == base && w != v) {
                            return false;
                        }
                        negative_cells.push((base, v));
                    }
                    out.push(Lit::new(v, *positive));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        !out.windows(2).any(|w| w[0] == !w[1])
    }

    /// Calls `emit` on every nontrivial ground instance of `clause`; stops
    /// early when `emit` returns false.
    pub(crate) fn ground_clause(&self, clause: &FlatClause, mut emit: impl FnMut(&[Lit]) -> bool) {
        let k = clause.num_vars;
        let mut env = vec![0usize; k];
        let mut out = Vec::new();
        loop {
            if self.instance(clause, &env, &mut out) && !emit(&out) {
                return;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                env[i] += 1;
                if env[i] < self.size {
                    break;
                }
                env[i] = 0;
                i += 1;
            }
        }
    }
}

/// Table contents read off a satisfying assignment.
pub(crate) struct Tables {
    pub size: usize,
    pub constants: Vec<usize>,
    pub functions: Vec<Vec<usize>>,
    pub relations: Vec<Vec<bool>>,
}

impl Tables {
    pub(crate) fn decode(layout: &Layout, sig: &Signature, solver: &Solver) -> Tables {
        let n = layout.size;
        let pick = |base: Var| (0..n).find(|&v| solver.model_value(base + v as Var)).unwrap_or(0);
        Tables {
            size: n,
            constants: (0..sig.constants.len()).map(|c| pick(layout.const_var(c, 0))).collect(),
            functions: (0..sig.functions.len())
                .map(|f| (0..layout.cells(f)).map(|cell| pick(layout.cell_var(f, cell, 0))).collect())
                .collect(),
            relations: (0..sig.relations.len())
                .map(|r| (0..layout.tuples(r)).map(|i| solver.model_value(layout.rel_var(r, i))).collect())
                .collect(),
        }
    }

    fn index(&self, args: &[u32], env: &[usize]) -> usize {
        args.iter().fold(0, |acc, &v| acc * self.size + env[v as usize])
    }

    fn lit_true(&self, l: &FlatLit, env: &[usize]) -> bool {
        match l {
            FlatLit::Rel { rel, args, positive } => self.relations[*rel][self.index(args, env)] == *positive,
            FlatLit::Fun { fun, args, res, positive } => {
                (self.functions[*fun][self.index(args, env)] == env[*res as usize]) == *positive
            }
            FlatLit::Const { constant, var, positive } => (self.constants[*constant] == env[*var as usize]) == *positive,
            FlatLit::Eq { a, b, positive } => (env[*a as usize] == env[*b as usize]) == *positive,
        }
    }
}

#[derive(Clone, Copy)]
enum Binding {
    Free,
    Defined(usize),
}

/// Enumeration order for the variables of a flat clause: a variable named by
/// a negative definition whose arguments are bound takes its single
/// falsifying value; other variables range over the domain.
pub(crate) struct Plan {
    order: Vec<(u32, Binding)>,
    check_at: Vec<Vec<usize>>,
    closed: Vec<usize>,
}

impl Plan {
    pub(crate) fn new(clause: &FlatClause) -> Plan {
        let k = clause.num_vars;
        let lit_vars: Vec<Vec<u32>> = clause.lits.iter().map(FlatLit::vars).collect();
        let mut bound = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let defined = clause.lits.iter().enumerate().find_map(|(i, l)| match l {
                FlatLit::Fun { args, res, positive: false, .. }
                    if !bound[*res as usize] && args.iter().all(|&a| bound[a as usize]) =>
                {
                    Some((*res, i))
                }
                FlatLit::Const { var, positive: false, .. } if !bound[*var as usize] => Some((*var, i)),
                _ => None,
            });
            if let Some((v, i)) = defined {
                bound[v as usize] = true;
                order.push((v, Binding::Defined(i)));
                continue;
            }
            let v = (0..k as u32)
                .filter(|&v| !bound[v as usize])
                .max_by_key(|&v| {
                    let completes = lit_vars
                        .iter()
                        .filter(|vs| vs.contains(&v) && vs.iter().all(|&u| u == v || bound[u as usize]))
                        .count();
                    let occurs = lit_vars.iter().filter(|vs| vs.contains(&v)).count();
                    (completes, occurs, std::cmp::Reverse(v))
                })
                .unwrap();
            bound[v as usize] = true;
            order.push((v, Binding::Free));
        }
        let depth_of: Vec<usize> = {
            let mut d = vec![0; k];
            for (i, (v, _)) in order.iter().enumerate() {
                d[*v as usize] = i;
            }
            d
        };
        let mut check_at = vec![Vec::new(); k];
        let mut closed = Vec::new();
        for (i, vs) in lit_vars.iter().enumerate() {
            match vs.iter().map(|&v| depth_of[v as usize]).max() {
                Some(d) => check_at[d].push(i),
                None => closed.push(i),
            }
        }
        Plan { order, check_at, closed }
    }

    /// Calls `f` with each assignment falsifying every literal, at most
    /// `limit` times. Returns the number of calls.
    pub(crate) fn violations(
        &self,
        clause: &FlatClause,
        tables: &Tables,
        limit: usize,
        f: &mut impl FnMut(&[usize]),
    ) -> usize {
        if self.closed.iter().any(|&i| tables.lit_true(&clause.lits[i], &[])) {
            return 0;
        }
        let mut env = vec![0; clause.num_vars];
        let mut found = 0;
        self.descend(0, clause, tables, &mut env, limit, &mut found, f);
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        depth: usize,
        clause: &FlatClause,
        tables: &Tables,
        env: &mut Vec<usize>,
        limit: usize,
        found: &mut usize,
        f: &mut impl FnMut(&[usize]),
    ) {
        if depth == self.order.len() {
            *found += 1;
            f(env);
            return;
        }
        let (var, binding) = self.order[depth];
        let values = match binding {
            Binding::Defined(i) => {
                let v = match &clause.lits[i] {
                    FlatLit::Fun { fun, args, .. } => tables.functions[*fun][tables.index(args, env)],
                    FlatLit::Const { constant, .. } => tables.constants[*constant],
                    _ => unreachable!(),
                };
                v..v + 1
            }
            Binding::Free => 0..tables.size,
        };
        for value in values {
            env[var as usize] = value;
            if self.check_at[depth].iter().any(|&i| tables.lit_true(&clause.lits[i], env)) {
                continue;
            }
            self.descend(depth + 1, clause, tables, env, limit, found, f);
            if *found >= limit {
                return;
            }
        }
    }
}
