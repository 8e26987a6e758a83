use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{Atom, Clause, Literal, Term};

use super::EncodedProblem;

/// Prover9 reads identifiers starting with `u`..`z` as variables.
fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| ('u'..='z').contains(&c))
}

fn is_plain(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_alphabetic()) && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_symbolic(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_alphanumeric() && c != '_')
}

struct Names {
    symbols: BTreeMap<String, String>,
}

impl Names {
    fn new(p: &EncodedProblem) -> Names {
        let v = &p.vocabulary;
        let mut taken: BTreeSet<String> = BTreeSet::new();
        let mut symbols = BTreeMap::new();
        let all = v
            .constants
            .iter()
            .cloned()
            .chain(v.functions.iter().map(|f| f.name.clone()))
            .chain(v.relations.iter().map(|r| r.name.clone()));
        for name in all {
            let good = (is_plain(&name) && !is_variable_name(&name)) || is_symbolic(&name);
            let base = if good {
                name.clone()
            } else {
                let cleaned: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
                format!("c_{cleaned}")
            };
            let fresh = super::fresh_name(&base, &taken);
            taken.insert(fresh.clone());
            symbols.insert(name, fresh);
        }
        Names { symbols }
    }

    fn var(&self, v: &str) -> String {
        if is_plain(v) && is_variable_name(v) {
            v.to_string()
        } else {
            let cleaned: String = v.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
            format!("v_{cleaned}")
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.var(v),
            Term::Const(c) => self.symbols[c].clone(),
            Term::App(f, args) if args.len() == 2 && is_symbolic(f) => {
                let side = |a: &Term| match a {
                    Term::App(g, inner) if inner.len() == 2 && is_symbolic(g) => format!("({})", self.term(a)),
                    _ => self.term(a),
                };
                format!("{} {} {}", side(&args[0]), self.symbols[f], side(&args[1]))
            }
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.symbols[f], args.join(", "))
            }
        }
    }

    fn atom(&self, a: &Atom) -> String {
        match a {
            Atom::Rel(r, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.symbols[r], args.join(", "))
            }
            Atom::Eq(s, t) => format!("{} = {}", self.term(s), self.term(t)),
        }
    }

    fn literal(&self, l: &Literal) -> String {
        match (&l.atom, l.positive) {
            (a, true) => self.atom(a),
            (Atom::Eq(s, t), false) => format!("{} != {}", self.term(s), self.term(t)),
            (a, false) => format!("-{}", self.atom(a)),
        }
    }

    fn clause(&self, c: &Clause) -> String {
        let body: Vec<String> = c.literals.iter().filter(|l| !l.positive).map(|l| self.atom(&l.atom)).collect();
        let head: Vec<String> = c.literals.iter().filter(|l| l.positive).map(|l| self.atom(&l.atom)).collect();
        match (body.is_empty(), head.is_empty()) {
            (true, _) => head.join(" | "),
            (false, true) => c.literals.iter().map(|l| self.literal(l)).collect::<Vec<_>>().join(" | "),
            (false, false) if head.len() == 1 => format!("{} -> {}", body.join(" & "), head[0]),
            (false, false) => format!("{} -> ({})", body.join(" & "), head.join(" | ")),
        }
    }
}

/// Input for Mace4: the axioms as assumptions and the goal in a separate
/// `goals` block, which Mace4 negates before searching.
pub fn emit_mace4(p: &EncodedProblem) -> String {
    let names = Names::new(p);
    let mut out = String::new();
    let renamed: Vec<String> = names
        .symbols
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("% `{a}` is written `{b}`\n"))
        .collect();
    out.extend(renamed);
    out.push_str("formulas(assumptions).\n");
    for (c, tag) in p.axioms.iter().zip(&p.provenance) {
        if !tag.is_empty() {
            out.push_str(&format!("  % {tag}\n"));
        }
        out.push_str(&format!("  {}.\n", names.clause(c)));
    }
    out.push_str("end_of_list.\n\nformulas(goals).\n");
    for d in &p.goal.disjuncts {
        let mut vars = Vec::new();
        for a in d {
            a.collect_vars(&mut vars);
        }
        let mut seen = BTreeSet::new();
        let prefix: String =
            vars.iter().filter(|v| seen.insert(**v)).map(|v| format!("exists {} ", names.var(v))).collect();
        let body: Vec<String> = d.iter().map(|a| names.atom(a)).collect();
        let matrix = if body.len() == 1 { body[0].clone() } else { format!("({})", body.join(" & ")) };
        out.push_str(&format!("  {prefix}{matrix}.\n"));
    }
    out.push_str("end_of_list.\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::parse_native;

    #[test]
    fn single_fact() {
        let p = parse_native("vocab { const a; rel P/1; }\nclause P(a) .\ngoal P(a) .").unwrap();
        let text = emit_mace4(&p);
        assert!(text.contains("formulas(assumptions).\n  P(a).\nend_of_list."), "{text}");
        assert!(text.contains("formulas(goals).\n  P(a).\nend_of_list."), "{text}");
    }

    #[test]
    fn names_that_read_as_variables_are_renamed() {
        let src = "vocab { const e, 0, yellow; fn */2; rel R/1; }\nclause ~R(x) | R((0 * x) * yellow) .\ngoal R(x * 0) & R(e) .";
        let text = emit_mace4(&parse_native(src).unwrap());
        assert!(text.contains("R(x) -> R((c_0 * x) * c_yellow)."), "{text}");
        assert!(text.contains("exists x (R(x * c_0) & R(e))."), "{text}");
    }
}
