//! Tarskian evaluation of terms and clauses over finite models.
//!
//! Clause checking enumerates assignments by backtracking over the clause
//! variables. Each literal is evaluated as soon as all of its variables are
//! bound, and a subtree is cut as soon as some literal is true, so the work
//! done is far below `n^vars` for the Horn-shaped clauses we care about while
//! remaining exhaustive.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::model::{Element, FiniteModel, FunctionTable, RelationTable};
use super::syntax::{Atom, Clause, ClauseSet, GoalFormula, Literal, Term};
use super::LogicError;

pub type Assignment = BTreeMap<String, Element>;

pub fn evaluate_term(model: &FiniteModel, term: &Term, assignment: &Assignment) -> Result<Element, LogicError> {
    match term {
        Term::Var(v) => assignment.get(v).copied().ok_or_else(|| LogicError::UnassignedVariable(v.clone())),
        Term::Const(c) => model.constants.get(c).copied().ok_or_else(|| LogicError::UndeclaredSymbol(c.clone())),
        Term::App(f, args) => {
            let table = model.functions.get(f).ok_or_else(|| LogicError::UndeclaredSymbol(f.clone()))?;
            if table.arity != args.len() {
                return Err(LogicError::ArityMismatch { symbol: f.clone(), expected: table.arity, found: args.len() });
            }
            let mut index = 0;
            for a in args {
                index = index * model.size + evaluate_term(model, a, assignment)?;
            }
            Ok(table.values[index])
        }
    }
}

pub fn atom_holds(model: &FiniteModel, atom: &Atom, assignment: &Assignment) -> Result<bool, LogicError> {
    match atom {
        Atom::Rel(r, args) => {
            let table = model.relations.get(r).ok_or_else(|| LogicError::UndeclaredSymbol(r.clone()))?;
            let mut index = 0;
            for a in args {
                index = index * model.size + evaluate_term(model, a, assignment)?;
            }
            Ok(table.contains_index(index))
        }
        Atom::Eq(s, t) => Ok(evaluate_term(model, s, assignment)? == evaluate_term(model, t, assignment)?),
    }
}

pub fn literal_holds(model: &FiniteModel, lit: &Literal, assignment: &Assignment) -> Result<bool, LogicError> {
    atom_holds(model, &lit.atom, assignment).map(|b| b == lit.positive)
}

enum CTerm<'m> {
    Var(usize),
    Elem(Element),
    App(&'m FunctionTable, Vec<CTerm<'m>>),
}

impl CTerm<'_> {
    #[inline]
    fn eval(&self, size: usize, env: &[Element]) -> Element {
        match self {
            CTerm::Var(i) => env[*i],
            CTerm::Elem(e) => *e,
            CTerm::App(table, args) => {
                let mut index = 0;
                for a in args {
                    index = index * size + a.eval(size, env);
                }
                table.values[index]
            }
        }
    }
}

enum CAtom<'m> {
    Rel(&'m RelationTable, Vec<CTerm<'m>>),
    Eq(CTerm<'m>, CTerm<'m>),
}

struct CLit<'m> {
    positive: bool,
    atom: CAtom<'m>,
}

impl CLit<'_> {
    #[inline]
    fn is_true(&self, size: usize, env: &[Element]) -> bool {
        let value = match &self.atom {
            CAtom::Rel(table, args) => {
                let mut index = 0;
                for a in args {
                    index = index * size + a.eval(size, env);
                }
                table.contains_index(index)
            }
            CAtom::Eq(s, t) => s.eval(size, env) == t.eval(size, env),
        };
        value == self.positive
    }
}

/// A clause compiled against one model, with variables numbered and a
/// binding order that lets literals be decided as early as possible.
pub(crate) struct CompiledClause<'m> {
    size: usize,
    vars: Vec<String>,
    lits: Vec<CLit<'m>>,
    order: Vec<usize>,
    /// Literals to evaluate once `order[..=d]` is bound; index 0 of `ground`
    /// holds literals without variables.
    check_at: Vec<Vec<usize>>,
    ground: Vec<usize>,
}

fn compile_term<'m>(model: &'m FiniteModel, term: &Term, vars: &[&str]) -> Result<CTerm<'m>, LogicError> {
    Ok(match term {
        Term::Var(v) => CTerm::Var(vars.iter().position(|x| x == v).expect("variable collected")),
        Term::Const(c) => {
            CTerm::Elem(*model.constants.get(c).ok_or_else(|| LogicError::Uninterpreted(c.clone()))?)
        }
        Term::App(f, args) => {
            let table = model.functions.get(f).ok_or_else(|| LogicError::Uninterpreted(f.clone()))?;
            if table.arity != args.len() {
                return Err(LogicError::ArityMismatch { symbol: f.clone(), expected: table.arity, found: args.len() });
            }
            CTerm::App(table, args.iter().map(|a| compile_term(model, a, vars)).collect::<Result<_, _>>()?)
        }
    })
}

impl<'m> CompiledClause<'m> {
    pub(crate) fn new(model: &'m FiniteModel, clause: &Clause) -> Result<Self, LogicError> {
        Self::from_literals(model, &clause.literals)
    }

    pub(crate) fn from_literals(model: &'m FiniteModel, literals: &[Literal]) -> Result<Self, LogicError> {
        let mut var_names = Vec::new();
        for l in literals {
            l.atom.collect_vars(&mut var_names);
        }
        let mut lits = Vec::with_capacity(literals.len());
        let mut lit_vars = Vec::with_capacity(literals.len());
        for l in literals {
            let atom = match &l.atom {
                Atom::Rel(r, args) => {
                    let table = model.relations.get(r).ok_or_else(|| LogicError::Uninterpreted(r.clone()))?;
                    if table.arity != args.len() {
                        return Err(LogicError::ArityMismatch {
                            symbol: r.clone(),
                            expected: table.arity,
                            found: args.len(),
                        });
                    }
                    CAtom::Rel(
                        table,
                        args.iter().map(|a| compile_term(model, a, &var_names)).collect::<Result<_, _>>()?,
                    )
                }
                Atom::Eq(s, t) => CAtom::Eq(compile_term(model, s, &var_names)?, compile_term(model, t, &var_names)?),
            };
            lits.push(CLit { positive: l.positive, atom });
            let mut vs = Vec::new();
            l.atom.collect_vars(&mut vs);
            lit_vars.push(vs.iter().map(|v| var_names.iter().position(|x| x == v).unwrap()).collect::<Vec<_>>());
        }

        // Greedy order: bind next the variable that completes the most literals,
        // breaking ties by occurrence count and then by first occurrence.
        let nvars = var_names.len();
        let mut bound = vec![false; nvars];
        let mut order = Vec::with_capacity(nvars);
        for _ in 0..nvars {
            let best = (0..nvars)
                .filter(|&v| !bound[v])
                .max_by_key(|&v| {
                    let completes = lit_vars
                        .iter()
                        .filter(|vs| vs.contains(&v) && vs.iter().all(|&u| u == v || bound[u]))
                        .count();
                    let occurs = lit_vars.iter().filter(|vs| vs.contains(&v)).count();
                    (completes, occurs, std::cmp::Reverse(v))
                })
                .unwrap();
            bound[best] = true;
            order.push(best);
        }
        let mut check_at = vec![Vec::new(); nvars];
        let mut ground = Vec::new();
        for (i, vs) in lit_vars.iter().enumerate() {
            match vs.iter().map(|v| order.iter().position(|o| o == v).unwrap()).max() {
                Some(d) => check_at[d].push(i),
                None => ground.push(i),
            }
        }
        Ok(CompiledClause {
            size: model.size,
            vars: var_names.into_iter().map(String::from).collect(),
            lits,
            order,
            check_at,
            ground,
        })
    }

    /// Calls `f` on every assignment (indexed like [`Self::var_names`]) under
    /// which every literal is false.
    pub(crate) fn for_each_falsifying(&self, mut f: impl FnMut(&[Element]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut env = vec![0; self.vars.len()];
        if self.ground.iter().any(|&i| self.lits[i].is_true(self.size, &env)) {
            return ControlFlow::Continue(());
        }
        if self.vars.is_empty() {
            return f(&env);
        }
        self.descend(0, &mut env, &mut f)
    }

    fn descend(
        &self,
        depth: usize,
        env: &mut Vec<Element>,
        f: &mut impl FnMut(&[Element]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let var = self.order[depth];
        let last = depth + 1 == self.order.len();
        for value in 0..self.size {
            env[var] = value;
            if self.check_at[depth].iter().any(|&i| self.lits[i].is_true(self.size, env)) {
                continue;
            }
            if last {
                f(env)?;
            } else {
                self.descend(depth + 1, env, f)?;
            }
        }
        ControlFlow::Continue(())
    }

    pub(crate) fn first_falsifying(&self) -> Option<Vec<Element>> {
        let mut found = None;
        let _ = self.for_each_falsifying(|env| {
            found = Some(env.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub(crate) fn to_assignment(&self, env: &[Element]) -> Assignment {
        self.vars.iter().cloned().zip(env.iter().copied()).collect()
    }
}

/// True iff every assignment of the clause variables satisfies some literal.
pub fn holds(model: &FiniteModel, clause: &Clause) -> Result<bool, LogicError> {
    Ok(falsifying_assignment(model, clause)?.is_none())
}

pub fn falsifying_assignment(model: &FiniteModel, clause: &Clause) -> Result<Option<Assignment>, LogicError> {
    let compiled = CompiledClause::new(model, clause)?;
    Ok(compiled.first_falsifying().map(|env| compiled.to_assignment(&env)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every axiom holds and no assignment satisfies the goal.
    ValidCertificate,
    FailingInstance { clause_index: usize, clause: Clause, assignment: Assignment },
    GoalSatisfied { disjunct: usize, witness: Assignment },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidCertificate)
    }
}

pub fn check_model(model: &FiniteModel, axioms: &[Clause], goal: &GoalFormula) -> Result<Verdict, LogicError> {
    for (clause_index, clause) in axioms.iter().enumerate() {
        if let Some(assignment) = falsifying_assignment(model, clause)? {
            return Ok(Verdict::FailingInstance { clause_index, clause: clause.clone(), assignment });
        }
    }
    for (disjunct, clause) in negate_goal(goal)?.iter().enumerate() {
        if let Some(witness) = falsifying_assignment(model, clause)? {
            return Ok(Verdict::GoalSatisfied { disjunct, witness });
        }
    }
    Ok(Verdict::ValidCertificate)
}

/// Purely negative clauses equivalent to the negation of an existential positive goal.
pub fn negate_goal(goal: &GoalFormula) -> Result<ClauseSet, LogicError> {
    goal.disjuncts
        .iter()
        .map(|conj| {
            if conj.is_empty() {
                return Err(LogicError::TrivialGoal);
            }
            Ok(Clause::new(conj.iter().cloned().map(Literal::neg).collect()))
        })
        .collect()
}
