use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::logic::{evaluate_term, Atom, Clause, CompiledClause, FiniteModel, RelationTable};

use super::RegularError;

fn head_index(clause: &Clause, targets: &BTreeMap<String, usize>) -> Result<usize, RegularError> {
    let mut head = None;
    for (i, l) in clause.literals.iter().enumerate() {
        if let Atom::Rel(r, _) = &l.atom {
            if l.positive && targets.contains_key(r) {
                if head.is_some() {
                    return Err(RegularError::NotHorn(clause.to_string()));
                }
                head = Some(i);
            }
        }
    }
    head.ok_or_else(|| RegularError::NotHorn(clause.to_string()))
}

/// Least interpretation of `targets` (name, arity) closed under the defining
/// clauses, all other symbols taken from `base`.
///
/// Each clause must contain exactly one positive literal over a target; any
/// other literal acts as a side condition in the body.
pub fn least_interpretation(
    clauses: &[Clause],
    base: &FiniteModel,
    targets: &[(&str, usize)],
) -> Result<BTreeMap<String, RelationTable>, RegularError> {
    let target_map: BTreeMap<String, usize> = targets.iter().map(|&(n, a)| (n.to_string(), a)).collect();
    let heads = clauses.iter().map(|c| head_index(c, &target_map)).collect::<Result<Vec<_>, _>>()?;
    let mut model = base.clone();
    for (name, &arity) in &target_map {
        model.set_relation(name.clone(), RelationTable::empty(arity, base.size));
    }
    loop {
        let mut derived: Vec<(String, Vec<usize>)> = Vec::new();
        for (clause, &h) in clauses.iter().zip(&heads) {
            let compiled = CompiledClause::new(&model, clause).map_err(RegularError::Logic)?;
            let Atom::Rel(name, args) = &clause.literals[h].atom else { unreachable!() };
            let mut err = None;
            let _ = compiled.for_each_falsifying(|env| {
                let assignment = compiled.to_assignment(env);
                match args.iter().map(|t| evaluate_term(&model, t, &assignment)).collect::<Result<Vec<_>, _>>() {
                    Ok(tuple) => {
                        derived.push((name.clone(), tuple));
                        ControlFlow::Continue(())
                    }
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            });
            if let Some(e) = err {
                return Err(RegularError::Logic(e));
            }
        }
        let mut changed = false;
        for (name, tuple) in derived {
            let table = model.relations.get_mut(&name).expect("target table");
            changed |= table.insert(&tuple);
        }
        if !changed {
            break;
        }
    }
    Ok(target_map.keys().map(|n| (n.clone(), model.relations[n].clone())).collect())
}
