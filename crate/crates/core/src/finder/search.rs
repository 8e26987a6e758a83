use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{
    check_model, holds, negate_goal, Clause, Element, FiniteModel, FunctionTable, GoalFormula, RelationTable,
    Verdict, Vocabulary,
};

use super::flatten::{flatten, split, FlatClause, Signature};
use super::ground::{Layout, Plan, Tables};
use super::sat::{Lit, SatResult, Solver};
use super::{FinderError, FinderOptions, SearchBudget, SearchOutcome, SearchStats, SizeResult, SizeStats};

const EAGER_CLAUSE_LIMIT: u128 = 1 << 20;
const EAGER_TOTAL_LIMIT: u128 = 3 << 20;
const LAZY_PER_CLAUSE: usize = 256;

struct Prepared {
    sig: Signature,
    clauses: Vec<FlatClause>,
    vocabulary: Vocabulary,
    originals: Vec<Clause>,
}

fn prepare(
    vocabulary: Option<&Vocabulary>,
    axioms: &[Clause],
    negated_goal: &[Clause],
    split_clauses: bool,
) -> Result<Prepared, FinderError> {
    let originals: Vec<Clause> = axioms.iter().chain(negated_goal).cloned().collect();
    let refs: Vec<&Clause> = originals.iter().collect();
    let mut sig = Signature::new(vocabulary, &refs)?;
    if let Some(v) = vocabulary {
        for c in &originals {
            v.check_clause(c)?;
        }
    }
    let vocabulary = match vocabulary {
        Some(v) => v.clone(),
        None => {
            let mut v = Vocabulary::new();
            for c in &sig.constants {
                v.add_constant(c.clone());
            }
            for (f, a) in &sig.functions {
                v.add_function(f.clone(), *a);
            }
            for (r, a) in &sig.relations {
                v.add_relation(r.clone(), *a);
            }
            v
        }
    };
    let mut clauses = Vec::new();
    for c in &originals {
        if c.literals.is_empty() {
            return Err(crate::logic::LogicError::EmptyClause.into());
        }
        if let Some(f) = flatten(c, &sig) {
            if split_clauses {
                clauses.extend(split(f, &mut sig));
            } else {
                clauses.push(f);
            }
        }
    }
    Ok(Prepared { sig, clauses, vocabulary, originals })
}

enum SizeOutcome {
    Model(FiniteModel),
    Exhausted,
    Unknown,
}

fn build_model(prep: &Prepared, tables: &Tables) -> FiniteModel {
    let n = tables.size;
    let mut model = FiniteModel::new(n);
    for (i, c) in prep.sig.constants.iter().enumerate() {
        model.set_constant(c.clone(), tables.constants[i]);
    }
    for (i, (f, a)) in prep.sig.functions.iter().enumerate() {
        model.functions.insert(f.clone(), FunctionTable { arity: *a, values: tables.functions[i].clone() });
    }
    for (i, (r, a)) in prep.sig.relations.iter().enumerate().take(prep.sig.real_relations) {
        let bits = &tables.relations[i];
        let table = RelationTable::from_fn(*a, n, |args: &[Element]| {
            bits[args.iter().fold(0, |acc, &x| acc * n + x)]
        });
        model.set_relation(r.clone(), table);
    }
    model.restrict_to(&prep.vocabulary)
}

fn search_size(
    prep: &Prepared,
    n: usize,
    options: &FinderOptions,
    budget: &SearchBudget,
    stop: &dyn Fn() -> bool,
) -> Result<(SizeOutcome, SizeStats), FinderError> {
    let started = Instant::now();
    let layout = Layout::new(&prep.sig, n);
    let mut solver = Solver::new(layout.num_vars);
    if let Some(seed) = options.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        for v in 0..layout.num_vars as u32 {
            solver.set_initial_activity(v, rng.gen::<f64>() * 1e-3);
        }
    }
    let mut stats = SizeStats {
        size: n,
        result: SizeResult::BudgetExceeded,
        decisions: 0,
        propagations: 0,
        conflicts: 0,
        ground_clauses: 0,
        lazy_instances: 0,
        refinements: 0,
        millis: 0,
    };
    let finish = |outcome: SizeOutcome, mut stats: SizeStats, solver: &Solver| {
        stats.decisions = solver.stats.decisions;
        stats.propagations = solver.stats.propagations;
        stats.conflicts = solver.stats.conflicts;
        stats.millis = started.elapsed().as_millis() as u64;
        stats.result = match outcome {
            SizeOutcome::Model(_) => SizeResult::ModelFound,
            SizeOutcome::Exhausted => SizeResult::Exhausted,
            SizeOutcome::Unknown => SizeResult::BudgetExceeded,
        };
        Ok((outcome, stats))
    };

    let mut count = 0u64;
    count += layout.cell_constraints(|c| {
        solver.add_clause(c);
    }) as u64;
    if options.symmetry_breaking {
        count += layout.symmetry_constraints(|c| {
            solver.add_clause(c);
        }) as u64;
    }

    let mut order: Vec<usize> = (0..prep.clauses.len()).collect();
    order.sort_by_key(|&i| prep.clauses[i].instances(n));
    let mut remaining = EAGER_TOTAL_LIMIT;
    let mut lazy = Vec::new();
    for i in order {
        let c = &prep.clauses[i];
        let inst = c.instances(n);
        if inst > EAGER_CLAUSE_LIMIT || inst > remaining {
            lazy.push(i);
            continue;
        }
        remaining -= inst;
        let mut emitted = 0u64;
        layout.ground_clause(c, |lits| {
            emitted += 1;
            solver.add_clause(lits)
        });
        count += emitted;
        if !solver.is_ok() {
            stats.ground_clauses = count;
            return finish(SizeOutcome::Exhausted, stats, &solver);
        }
        if stop() {
            stats.ground_clauses = count;
            return finish(SizeOutcome::Unknown, stats, &solver);
        }
    }
    stats.ground_clauses = count;
    let plans: Vec<Plan> = lazy.iter().map(|&i| Plan::new(&prep.clauses[i])).collect();

    loop {
        match solver.solve(budget.node_limit, stop) {
            SatResult::Unsat => return finish(SizeOutcome::Exhausted, stats, &solver),
            SatResult::Unknown => return finish(SizeOutcome::Unknown, stats, &solver),
            SatResult::Sat => {}
        }
        let tables = Tables::decode(&layout, &prep.sig, &solver);
        let mut pending: Vec<Vec<Lit>> = Vec::new();
        for (plan, &i) in plans.iter().zip(&lazy) {
            let clause = &prep.clauses[i];
            let mut buf = Vec::new();
            plan.violations(clause, &tables, LAZY_PER_CLAUSE, &mut |env| {
                if layout.instance(clause, env, &mut buf) {
                    pending.push(buf.clone());
                }
            });
        }
        if pending.is_empty() {
            let model = build_model(prep, &tables);
            for c in &prep.originals {
                if !holds(&model, c)? {
                    return Err(FinderError::Unsound(format!("clause {c} fails at size {n}")));
                }
            }
            return finish(SizeOutcome::Model(model), stats, &solver);
        }
        stats.refinements += 1;
        stats.lazy_instances += pending.len() as u64;
        for c in &pending {
            solver.add_clause(c);
        }
        if stop() {
            return finish(SizeOutcome::Unknown, stats, &solver);
        }
    }
}

fn deepen(
    prep: &Prepared,
    first: usize,
    last: usize,
    options: &FinderOptions,
    budget: &SearchBudget,
) -> Result<SearchOutcome, FinderError> {
    budget.validate()?;
    let started = Instant::now();
    let deadline = budget.total.map(|d| started + d);
    let best = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(first);
    let results: Mutex<Vec<Result<(usize, SizeOutcome, SizeStats), FinderError>>> = Mutex::new(Vec::new());

    let worker = || loop {
        let n = next.fetch_add(1, Ordering::SeqCst);
        if n > last || n > best.load(Ordering::SeqCst) || deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let size_deadline = match (budget.per_size.map(|d| Instant::now() + d), deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let stop = || best.load(Ordering::Relaxed) < n || size_deadline.is_some_and(|d| Instant::now() >= d);
        let r = search_size(prep, n, options, budget, &stop);
        if let Ok((SizeOutcome::Model(_), _)) = &r {
            best.fetch_min(n, Ordering::SeqCst);
        }
        let failed = r.is_err();
        results.lock().unwrap().push(r.map(|(o, s)| (n, o, s)));
        if failed {
            best.store(0, Ordering::SeqCst);
            break;
        }
    };

    let threads = options.threads.clamp(1, (last + 1).saturating_sub(first).max(1));
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(&worker);
            }
        });
    }

    let mut done: Vec<(usize, SizeOutcome, SizeStats)> = Vec::new();
    for r in results.into_inner().unwrap() {
        done.push(r?);
    }
    done.sort_by_key(|(n, _, _)| *n);
    let mut stats = SearchStats { sizes: done.iter().map(|(_, _, s)| s.clone()).collect(), millis: 0 };
    stats.millis = started.elapsed().as_millis() as u64;

    let mut all_exhausted = true;
    let mut expected = first;
    for (n, outcome, _) in done {
        if n != expected {
            break;
        }
        expected += 1;
        match outcome {
            SizeOutcome::Model(model) => return Ok(SearchOutcome::ModelFound { model, size: n, stats }),
            SizeOutcome::Exhausted => {}
            SizeOutcome::Unknown => all_exhausted = false,
        }
    }
    if all_exhausted && expected == last + 1 {
        Ok(SearchOutcome::Exhausted { size: last, stats })
    } else {
        Ok(SearchOutcome::BudgetExceeded { stats })
    }
}

/// Model search with explicit options.
#[derive(Clone, Debug, Default)]
pub struct ModelFinder {
    pub options: super::FinderOptions,
}

impl ModelFinder {
    pub fn new(options: FinderOptions) -> Self {
        ModelFinder { options }
    }

    /// Searches domain size `size` only.
    pub fn find_model(
        &self,
        axioms: &[Clause],
        negated_goal: &[Clause],
        size: usize,
        budget: &SearchBudget,
    ) -> Result<SearchOutcome, FinderError> {
        if size == 0 {
            return Err(FinderError::InvalidBudget("domain size must be positive".into()));
        }
        let prep = prepare(self.options.vocabulary.as_ref(), axioms, negated_goal, self.options.split_clauses)?;
        deepen(&prep, size, size, &self.options, budget)
    }

    /// Iterative deepening from size 1 up to the budget's maximum for a model
    /// of the axioms in which the goal is false.
    pub fn find_countermodel(
        &self,
        axioms: &[Clause],
        goal: &GoalFormula,
        budget: &SearchBudget,
    ) -> Result<SearchOutcome, FinderError> {
        let negated = negate_goal(goal)?;
        let prep = prepare(self.options.vocabulary.as_ref(), axioms, &negated, self.options.split_clauses)?;
        let outcome = deepen(&prep, 1, budget.max_size, &self.options, budget)?;
        if let SearchOutcome::ModelFound { model, size, .. } = &outcome {
            match check_model(model, axioms, goal)? {
                Verdict::ValidCertificate => {}
                v => return Err(FinderError::Unsound(format!("size {size}: {v:?}"))),
            }
        }
        Ok(outcome)
    }
}

/// [`ModelFinder::find_model`] with default options.
pub fn find_model(
    axioms: &[Clause],
    negated_goal: &[Clause],
    size: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome, FinderError> {
    ModelFinder::default().find_model(axioms, negated_goal, size, budget)
}

/// [`ModelFinder::find_countermodel`] with default options.
pub fn find_countermodel(axioms: &[Clause], goal: &GoalFormula, budget: &SearchBudget) -> Result<SearchOutcome, FinderError> {
    ModelFinder::default().find_countermodel(axioms, goal, budget)
}

/// A literal of a ground constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundLiteral {
    /// `name = value`
    Constant { name: String, value: Element, positive: bool },
    /// `function(args) = value`
    Cell { function: String, args: Vec<Element>, value: Element, positive: bool },
    Relation { name: String, args: Vec<Element>, positive: bool },
}

/// Ground constraints of a clause set at one domain size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grounding {
    pub size: usize,
    /// Clauses after flattening and splitting.
    pub flat_clauses: usize,
    /// Sum over the flat clauses of `size^vars`.
    pub instances: u128,
    /// Exactly-one constraints on constants and function cells.
    pub cell_constraints: usize,
    /// Instances not satisfied by functionality alone.
    pub constraints: Vec<Vec<GroundLiteral>>,
}

fn describe(sig: &Signature, layout: &Layout, lit: Lit) -> GroundLiteral {
    let n = layout.size;
    let v = lit.var();
    let positive = lit.is_positive();
    for c in 0..sig.constants.len() {
        if v >= layout.const_var(c, 0) && v < layout.const_var(c, 0) + n as u32 {
            return GroundLiteral::Constant {
                name: sig.constants[c].clone(),
                value: (v - layout.const_var(c, 0)) as usize,
                positive,
            };
        }
    }
    for (f, (name, arity)) in sig.functions.iter().enumerate() {
        let base = layout.cell_var(f, 0, 0);
        let span = (layout.cells(f) * n) as u32;
        if v >= base && v < base + span {
            let off = (v - base) as usize;
            return GroundLiteral::Cell {
                function: name.clone(),
                args: crate::logic::index_tuple(n, *arity, off / n),
                value: off % n,
                positive,
            };
        }
    }
    for (r, (name, arity)) in sig.relations.iter().enumerate() {
        let base = layout.rel_var(r, 0);
        if v >= base && v < base + layout.tuples(r) as u32 {
            return GroundLiteral::Relation {
                name: name.clone(),
                args: crate::logic::index_tuple(n, *arity, (v - base) as usize),
                positive,
            };
        }
    }
    unreachable!("variable outside the layout")
}

/// Number of ground instances of the flattened clauses at `size`.
pub fn instance_count(
    axioms: &[Clause],
    negated_goal: &[Clause],
    size: usize,
    split_clauses: bool,
) -> Result<u128, FinderError> {
    let prep = prepare(None, axioms, negated_goal, split_clauses)?;
    Ok(prep.clauses.iter().map(|c| c.instances(size)).sum())
}

/// Full grounding at one domain size; fails when the instance count exceeds
/// `max_instances`.
pub fn ground(
    axioms: &[Clause],
    negated_goal: &[Clause],
    size: usize,
    split_clauses: bool,
    max_instances: u128,
) -> Result<Grounding, FinderError> {
    let prep = prepare(None, axioms, negated_goal, split_clauses)?;
    let instances: u128 = prep.clauses.iter().map(|c| c.instances(size)).sum();
    if instances > max_instances {
        return Err(FinderError::GroundingTooLarge { instances, cap: max_instances });
    }
    let layout = Layout::new(&prep.sig, size);
    let cell_constraints = layout.cell_constraints(|_| {});
    let mut constraints = Vec::new();
    for c in &prep.clauses {
        layout.ground_clause(c, |lits| {
            constraints.push(lits.iter().map(|&l| describe(&prep.sig, &layout, l)).collect());
            true
        });
    }
    Ok(Grounding { size, flat_clauses: prep.clauses.len(), instances, cell_constraints, constraints })
}
