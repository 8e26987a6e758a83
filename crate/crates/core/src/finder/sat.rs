//! Conflict-driven clause learning over the boolean cell variables.
//!
//! Two watched literals, VSIDS with phase saving, first-UIP learning with
//! local minimization, Luby restarts and LBD-based reduction of the learnt
//! clause database. Clauses may be added between calls to [`Solver::solve`].

use std::ops::Not;

pub(crate) type Var = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Lit(u32);

impl Lit {
    pub(crate) fn new(var: Var, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub(crate) fn var(self) -> Var {
        self.0 >> 1
    }

    pub(crate) fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;
const NO_REASON: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SatResult {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
}

struct Header {
    start: u32,
    len: u32,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f32,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

pub(crate) struct Solver {
    headers: Vec<Header>,
    arena: Vec<Lit>,
    wasted: usize,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    learnts: Vec<u32>,
    cla_inc: f32,
    next_reduce: u64,
    reductions: u64,
    ok: bool,
    model: Vec<bool>,
    pub(crate) stats: SolverStats,
}

impl Solver {
    pub(crate) fn new(num_vars: usize) -> Solver {
        let mut s = Solver {
            headers: Vec::new(),
            arena: Vec::new(),
            wasted: 0,
            watches: vec![Vec::new(); 2 * num_vars],
            assign: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            heap: Heap::default(),
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            learnts: Vec::new(),
            cla_inc: 1.0,
            next_reduce: 2000,
            reductions: 0,
            ok: true,
            model: Vec::new(),
            stats: SolverStats::default(),
        };
        for v in 0..num_vars as Var {
            s.heap.insert(v, &s.activity);
        }
        s
    }

    /// Seeds the branching order; larger values are decided first.
    pub(crate) fn set_initial_activity(&mut self, var: Var, value: f64) {
        self.activity[var as usize] = value;
        self.heap.update(var, &self.activity);
    }

    pub(crate) fn is_ok(&self) -> bool {
        self.ok
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assign[l.var() as usize];
        if l.is_positive() {
            a
        } else {
            -a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at the root level. Returns false once the clause set is
    /// known to be unsatisfiable.
    pub(crate) fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        let mut j = 0;
        for i in 0..c.len() {
            let l = c[i];
            if i + 1 < c.len() && c[i + 1] == !l {
                return true;
            }
            match self.value(l) {
                TRUE => return true,
                FALSE => {}
                _ => {
                    c[j] = l;
                    j += 1;
                }
            }
        }
        c.truncate(j);
        match c.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(&c, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: &[Lit], learnt: bool, lbd: u32) -> u32 {
        let cref = self.headers.len() as u32;
        self.headers.push(Header {
            start: self.arena.len() as u32,
            len: lits.len() as u32,
            learnt,
            deleted: false,
            lbd,
            activity: 0.0,
        });
        self.arena.extend_from_slice(lits);
        self.watches[lits[0].index()].push(Watcher { cref, blocker: lits[1] });
        self.watches[lits[1].index()].push(Watcher { cref, blocker: lits[0] });
        cref
    }

    fn lits(&self, cref: u32) -> &[Lit] {
        let h = &self.headers[cref as usize];
        &self.arena[h.start as usize..(h.start + h.len) as usize]
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.assign[v] = if l.is_positive() { TRUE } else { FALSE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let h = &self.headers[w.cref as usize];
                if h.deleted {
                    continue;
                }
                let (start, len) = (h.start as usize, h.len as usize);
                if self.arena[start] == false_lit {
                    self.arena.swap(start, start + 1);
                }
                let first = self.arena[start];
                let nw = Watcher { cref: w.cref, blocker: first };
                if first != w.blocker && self.value(first) == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..len {
                    let l = self.arena[start + k];
                    if self.value(l) != FALSE {
                        self.arena[start + 1] = l;
                        self.arena[start + k] = false_lit;
                        self.watches[l.index()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var() as usize;
            self.assign[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.phase[v] = l.is_positive();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn bump_var(&mut self, v: Var) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in &mut self.activity {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let h = &mut self.headers[cref as usize];
        if !h.learnt {
            return;
        }
        h.activity += self.cla_inc;
        if h.activity > 1e20 {
            for &c in &self.learnts {
                self.headers[c as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32, u32) {
        let mut out = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            self.bump_clause(confl);
            let h = &self.headers[confl as usize];
            let (start, len) = (h.start as usize, h.len as usize);
            let skip = usize::from(p.is_some());
            for k in skip..len {
                let q = self.arena[start + k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(q.var());
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        out.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var() as usize];
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        out[0] = !p.unwrap();

        let marked: Vec<Lit> = out[1..].to_vec();
        let mut j = 1;
        for i in 1..out.len() {
            let l = out[i];
            let r = self.reason[l.var() as usize];
            let redundant = r != NO_REASON
                && self.lits(r)[1..].iter().all(|q| self.seen[q.var() as usize] || self.level[q.var() as usize] == 0);
            if !redundant {
                out[j] = l;
                j += 1;
            }
        }
        out.truncate(j);
        for l in marked {
            self.seen[l.var() as usize] = false;
        }

        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[out[i].var() as usize] > self.level[out[max_i].var() as usize] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[out[1].var() as usize];
        }
        let mut levels: Vec<u32> = out.iter().map(|l| self.level[l.var() as usize]).collect();
        levels.sort_unstable();
        levels.dedup();
        (out, bt, levels.len() as u32)
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v as usize] == UNDEF {
                return Some(Lit::new(v, self.phase[v as usize]));
            }
        }
        None
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.lits(cref)[0];
        self.reason[first.var() as usize] == cref && self.value(first) == TRUE
    }

    fn reduce_db(&mut self) {
        self.reductions += 1;
        self.next_reduce = self.stats.conflicts + 2000 + 300 * self.reductions;
        let mut cands: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| self.headers[c as usize].lbd > 2 && !self.locked(c))
            .collect();
        cands.sort_by(|&a, &b| {
            let (ha, hb) = (&self.headers[a as usize], &self.headers[b as usize]);
            hb.lbd.cmp(&ha.lbd).then(ha.activity.partial_cmp(&hb.activity).unwrap_or(std::cmp::Ordering::Equal))
        });
        for &c in &cands[..cands.len() / 2] {
            let h = &mut self.headers[c as usize];
            h.deleted = true;
            self.wasted += h.len as usize;
        }
        self.learnts.retain(|&c| !self.headers[c as usize].deleted);
        if self.wasted * 2 > self.arena.len() {
            self.collect_garbage();
        }
    }

    fn collect_garbage(&mut self) {
        let mut arena = Vec::with_capacity(self.arena.len() - self.wasted);
        for h in &mut self.headers {
            if h.deleted {
                h.len = 0;
                h.start = 0;
                continue;
            }
            let start = arena.len() as u32;
            arena.extend_from_slice(&self.arena[h.start as usize..(h.start + h.len) as usize]);
            h.start = start;
        }
        self.arena = arena;
        self.wasted = 0;
        let headers = &self.headers;
        for ws in &mut self.watches {
            ws.retain(|w| !headers[w.cref as usize].deleted);
        }
    }

    /// Runs until satisfiable, unsatisfiable, the total number of decisions
    /// reaches `decision_limit` or `stop` returns true. The solver is back at
    /// the root level afterwards.
    pub(crate) fn solve(&mut self, decision_limit: Option<u64>, stop: &dyn Fn() -> bool) -> SatResult {
        if !self.ok {
            return SatResult::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SatResult::Unsat;
        }
        let mut restart = 0u32;
        loop {
            let limit = luby(restart) * 100;
            restart += 1;
            match self.search(limit, decision_limit, stop) {
                Some(r) => {
                    if r == SatResult::Sat {
                        self.model = self.assign.iter().map(|&a| a == TRUE).collect();
                    }
                    self.cancel_until(0);
                    return r;
                }
                None => self.stats.restarts += 1,
            }
        }
    }

    fn search(&mut self, limit: u64, decision_limit: Option<u64>, stop: &dyn Fn() -> bool) -> Option<SatResult> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SatResult::Unsat);
                }
                let (learnt, bt, lbd) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = self.attach(&learnt, true, lbd);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.enqueue(learnt[0], cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                if self.stats.conflicts % 128 == 0 && stop() {
                    return Some(SatResult::Unknown);
                }
            } else {
                if conflicts >= limit {
                    self.cancel_until(0);
                    return None;
                }
                if self.stats.conflicts >= self.next_reduce {
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => return Some(SatResult::Sat),
                    Some(l) => {
                        if decision_limit.is_some_and(|m| self.stats.decisions >= m) {
                            return Some(SatResult::Unknown);
                        }
                        self.stats.decisions += 1;
                        if self.stats.decisions % 4096 == 0 && stop() {
                            return Some(SatResult::Unknown);
                        }
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }

    /// Value of `v` in the last satisfying assignment.
    pub(crate) fn model_value(&self, v: Var) -> bool {
        self.model[v as usize]
    }
}

fn luby(mut x: u32) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < u64::from(x) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != u64::from(x) {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size as u32;
    }
    1 << seq
}

/// Max-heap of variables keyed by activity, ties broken by lower index.
#[derive(Default)]
struct Heap {
    items: Vec<Var>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl Heap {
    fn better(a: Var, b: Var, act: &[f64]) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.pos.len() <= v as usize {
            self.pos.resize(v as usize + 1, ABSENT);
        }
        if self.pos[v as usize] != ABSENT {
            return;
        }
        self.pos[v as usize] = self.items.len();
        self.items.push(v);
        self.up(self.items.len() - 1, act);
    }

    fn update(&mut self, v: Var, act: &[f64]) {
        if let Some(&p) = self.pos.get(v as usize) {
            if p != ABSENT {
                self.up(p, act);
                self.down(self.pos[v as usize], act);
            }
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.items.first()?;
        let last = self.items.pop().unwrap();
        self.pos[top as usize] = ABSENT;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(v, self.items[parent], act) {
                break;
            }
            self.items[i] = self.items[parent];
            self.pos[self.items[i] as usize] = i;
            i = parent;
        }
        self.items[i] = v;
        self.pos[v as usize] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        let n = self.items.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && Self::better(self.items[r], self.items[l], act) { r } else { l };
            if !Self::better(self.items[child], v, act) {
                break;
            }
            self.items[i] = self.items[child];
            self.pos[self.items[i] as usize] = i;
            i = child;
        }
        self.items[i] = v;
        self.pos[v as usize] = i;
    }
}
