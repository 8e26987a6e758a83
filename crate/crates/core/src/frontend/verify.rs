use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::encoder::{emit_mace4, emit_native, encode_param, encode_rewriting, encode_rmc, EncodedProblem};
use crate::finder::{FinderOptions, ModelFinder, SearchBudget, SearchOutcome};
use crate::param::{backward_reach, bounded_bad_search, BackwardVerdict, BoundedResult, ParamSystem, DEFAULT_ITERATION_CAP};
use crate::regular::{
    forward_iterate, is_subset, minimal_dfa, product, upward_closure_nfa, witness_from_rmc, witness_from_unsafe_cone,
    ForwardOutcome, Letter, Nfa, ProductMode, RegularError, Transducer,
};

use super::automaton::automaton_to_text;
use super::report::{CertificateKind, Report, Verdict, ORACLE_DISCLAIMER};
use super::spec::{RmcSpec, SpecBody, SpecFile};
use super::FrontendError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Fcm,
    Monotone,
    RmcForward,
    Oracle,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Fcm => "fcm",
            Backend::Monotone => "monotone",
            Backend::RmcForward => "rmc-forward",
            Backend::Oracle => "oracle",
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fcm" => Ok(Backend::Fcm),
            "monotone" => Ok(Backend::Monotone),
            "rmc-forward" => Ok(Backend::RmcForward),
            "oracle" => Ok(Backend::Oracle),
            other => Err(format!("unknown backend `{other}`; expected fcm, monotone, rmc-forward or oracle")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Native,
    Mace4,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "native" => Ok(Format::Native),
            "mace4" => Ok(Format::Mace4),
            other => Err(format!("unknown format `{other}`; expected native or mace4")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_size: usize,
    pub timeout: Duration,
    /// Longest configuration the oracle explores.
    pub oracle_length: usize,
    pub oracle_node_cap: usize,
    pub forward_iterations: usize,
    pub backward_iterations: usize,
    pub finder: FinderOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_size: 12,
            timeout: Duration::from_secs(300),
            oracle_length: 6,
            oracle_node_cap: 2_000_000,
            forward_iterations: 100,
            backward_iterations: DEFAULT_ITERATION_CAP,
            finder: FinderOptions::from_env(),
        }
    }
}

pub fn encode_spec(spec: &SpecFile) -> Result<EncodedProblem, FrontendError> {
    Ok(match &spec.body {
        SpecBody::System(sys) => encode_param(sys)?,
        SpecBody::Rmc(r) => encode_rmc(&r.init, &r.bad, &r.trans)?,
        SpecBody::Rewrite(rw) => encode_rewriting(rw)?,
    })
}

pub fn encode_cmd(spec: &SpecFile, format: Format) -> Result<String, FrontendError> {
    let p = encode_spec(spec)?;
    Ok(match format {
        Format::Native => emit_native(&p),
        Format::Mace4 => emit_mace4(&p),
    })
}

/// Human-readable tables of a report's model.
pub fn model_show(report: &Report) -> String {
    let mut out = format!("{report}\n");
    match &report.model {
        Some(m) => out.push_str(&m.to_string()),
        None => out.push_str("no model in this report\n"),
    }
    out
}

fn incompatible(spec: &SpecFile, backend: Backend) -> FrontendError {
    FrontendError::Incompatible { backend: backend.name().into(), kind: spec.kind().into() }
}

pub fn verify(spec: &SpecFile, backend: Backend, options: &VerifyOptions) -> Result<Report, FrontendError> {
    let started = Instant::now();
    let mut report = match backend {
        Backend::Fcm => fcm(spec, options)?,
        Backend::Monotone => match &spec.body {
            SpecBody::System(sys) => monotone(spec, sys, options)?,
            _ => return Err(incompatible(spec, backend)),
        },
        Backend::RmcForward => match &spec.body {
            SpecBody::Rmc(r) => rmc_forward(spec, r, options)?,
            _ => return Err(incompatible(spec, backend)),
        },
        Backend::Oracle => oracle(spec, options)?,
    };
    report.notes.extend(spec.notes.iter().cloned());
    report.millis = started.elapsed().as_millis() as u64;
    Ok(report)
}

fn fcm(spec: &SpecFile, options: &VerifyOptions) -> Result<Report, FrontendError> {
    let problem = encode_spec(spec)?;
    let mut finder_options = options.finder.clone();
    finder_options.vocabulary = Some(problem.vocabulary.clone());
    let budget = SearchBudget::new(options.max_size).with_total(options.timeout);
    let outcome = ModelFinder::new(finder_options).find_countermodel(&problem.axioms, &problem.goal, &budget)?;
    let stats = outcome.stats().clone();
    let mut report = match outcome {
        SearchOutcome::ModelFound { model, .. } => {
            let mut r = Report::new(&spec.name, spec.kind(), "fcm", Verdict::Safe { certificate: CertificateKind::Countermodel });
            r.model = Some(model);
            r.problem = Some(emit_native(&problem));
            r
        }
        SearchOutcome::Exhausted { size, .. } => Report::new(
            &spec.name,
            spec.kind(),
            "fcm",
            Verdict::Inconclusive { reason: format!("no countermodel of size at most {size}") },
        ),
        SearchOutcome::BudgetExceeded { .. } => Report::new(
            &spec.name,
            spec.kind(),
            "fcm",
            Verdict::Inconclusive { reason: "search budget exhausted before a countermodel was found".into() },
        ),
    };
    report.search = Some(stats);
    report.notes.extend(problem.notes);
    Ok(report)
}

fn monotone(spec: &SpecFile, sys: &ParamSystem, options: &VerifyOptions) -> Result<Report, FrontendError> {
    let out = backward_reach(sys, options.backward_iterations)?;
    let mut report = match &out.verdict {
        BackwardVerdict::Safe => {
            Report::new(&spec.name, spec.kind(), "monotone", Verdict::Safe { certificate: CertificateKind::BackwardAntichain })
        }
        BackwardVerdict::Inconclusive { witness } => Report::new(
            &spec.name,
            spec.kind(),
            "monotone",
            Verdict::Inconclusive {
                reason: format!(
                    "the abstract backward fixpoint contains the initial configuration {}",
                    sys.format_word(witness)
                ),
            },
        ),
    };
    report.antichain = Some(out.fixpoint.generators().iter().map(|w| sys.format_word(w)).collect());
    report.notes.push(format!("backward fixpoint after {} iterations", out.iterations));
    Ok(report)
}

fn rmc_forward(spec: &SpecFile, r: &RmcSpec, options: &VerifyOptions) -> Result<Report, FrontendError> {
    let language = match forward_iterate(&r.trans, &r.init, options.forward_iterations)? {
        ForwardOutcome::Fixpoint { language, .. } => language,
        ForwardOutcome::NoConvergence { iterations } => {
            return Ok(Report::new(
                &spec.name,
                spec.kind(),
                "rmc-forward",
                Verdict::Inconclusive { reason: format!("no convergence after {iterations} iterations") },
            ))
        }
    };
    let reach = language.to_nfa();
    if let Some(w) = shortest_word(&product(&reach, &r.bad, ProductMode::Intersection)?) {
        let trace = rmc_bounded_search(r, w.len(), options.oracle_node_cap)?;
        let verdict = match trace {
            Some(t) => Verdict::UnsafeAtBound { trace: t.iter().map(|w| format_letters(&r.init.alphabet, w)).collect() },
            None => Verdict::Inconclusive {
                reason: format!("the reachable set contains the bad word {}", format_letters(&r.init.alphabet, &w)),
            },
        };
        return Ok(Report::new(&spec.name, spec.kind(), "rmc-forward", verdict));
    }
    let model = witness_from_rmc(&r.init, &r.bad, &r.trans, &reach)?;
    let mut report =
        Report::new(&spec.name, spec.kind(), "rmc-forward", Verdict::Safe { certificate: CertificateKind::WitnessModel });
    report.model = Some(model);
    report.problem = Some(emit_native(&encode_rmc(&r.init, &r.bad, &r.trans)?));
    report.invariant = Some(automaton_to_text(&reach));
    Ok(report)
}

fn format_letters(alphabet: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join(" ")
}

fn shortest_word(nfa: &Nfa) -> Option<Vec<Letter>> {
    let mut succ: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); nfa.num_states()];
    for &(p, a, q) in &nfa.transitions {
        succ[p].push((a, q));
    }
    let mut parent: BTreeMap<usize, Option<(usize, Letter)>> = BTreeMap::new();
    parent.insert(nfa.initial, None);
    let mut queue = VecDeque::from([nfa.initial]);
    while let Some(p) = queue.pop_front() {
        if nfa.accepting.contains(&p) {
            let mut w = Vec::new();
            let mut cur = p;
            while let Some(Some((prev, a))) = parent.get(&cur) {
                w.push(*a);
                cur = *prev;
            }
            w.reverse();
            return Some(w);
        }
        for &(a, q) in &succ[p] {
            if !parent.contains_key(&q) {
                parent.insert(q, Some((p, a)));
                queue.push_back(q);
            }
        }
    }
    None
}

/// Images of `word` under the transducer.
fn transduce(t: &Transducer, word: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut frontier: BTreeSet<(usize, Vec<Letter>)> = BTreeSet::from([(t.initial, Vec::new())]);
    for &a in word {
        let mut next = BTreeSet::new();
        for (s, out) in &frontier {
            for &(p, i, o, q) in &t.transitions {
                if p == *s && i == a {
                    let mut w = out.clone();
                    w.push(o);
                    next.insert((q, w));
                }
            }
        }
        frontier = next;
    }
    frontier.into_iter().filter(|(s, _)| t.accepting.contains(s)).map(|(_, w)| w).collect()
}

/// Shortest run from an initial word to a bad word among words of length at
/// most `max_length`, by explicit search.
pub fn rmc_bounded_search(r: &RmcSpec, max_length: usize, node_cap: usize) -> Result<Option<Vec<Vec<Letter>>>, FrontendError> {
    let k = r.init.alphabet.len();
    let mut explored = 0usize;
    for len in 0..=max_length {
        let mut parent: BTreeMap<Vec<Letter>, Option<Vec<Letter>>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for w in Nfa::words_of_length(k, len).filter(|w| r.init.accepts(w)) {
            parent.insert(w.clone(), None);
            queue.push_back(w);
        }
        while let Some(w) = queue.pop_front() {
            if r.bad.accepts(&w) {
                let mut trace = vec![w.clone()];
                let mut cur = &w;
                while let Some(Some(p)) = parent.get(cur) {
                    trace.push(p.clone());
                    cur = p;
                }
                trace.reverse();
                return Ok(Some(trace));
            }
            for next in transduce(&r.trans, &w) {
                if !parent.contains_key(&next) {
                    explored += 1;
                    if explored > node_cap {
                        return Err(RegularError::Malformed(format!("bounded search exceeded {node_cap} words")).into());
                    }
                    parent.insert(next.clone(), Some(w.clone()));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(None)
}

fn oracle(spec: &SpecFile, options: &VerifyOptions) -> Result<Report, FrontendError> {
    let len = options.oracle_length;
    let cap = options.oracle_node_cap;
    let trace: Option<Vec<String>> = match &spec.body {
        SpecBody::System(sys) => match bounded_bad_search(sys, len, cap)? {
            BoundedResult::BadReachable { trace } => Some(trace.iter().map(|w| sys.format_word(w)).collect()),
            BoundedResult::NoBadUpTo { .. } => None,
        },
        SpecBody::Rmc(r) => rmc_bounded_search(r, len, cap)?
            .map(|t| t.iter().map(|w| format_letters(&r.init.alphabet, w)).collect()),
        SpecBody::Rewrite(rw) => {
            let parent = rw.reachable_bounded(len, cap)?;
            parent.keys().filter(|w| rw.is_bad(w)).min_by_key(|w| (w.len(), (*w).clone())).map(|bad| {
                let mut trace = vec![bad.clone()];
                let mut cur = bad;
                while let Some(Some(p)) = parent.get(cur) {
                    trace.push(p.clone());
                    cur = p;
                }
                trace.reverse();
                trace.iter().map(|w| format_letters(&rw.alphabet, w)).collect()
            })
        }
    };
    let verdict = match trace {
        Some(trace) => Verdict::UnsafeAtBound { trace },
        None => Verdict::Inconclusive {
            reason: format!("{ORACLE_DISCLAIMER}: no bad configuration of length at most {len} is reachable"),
        },
    };
    let report = Report::new(&spec.name, spec.kind(), "oracle", verdict);
    Ok(report)
}

fn rejected(spec: &SpecFile, reason: String) -> Report {
    Report::new(&spec.name, spec.kind(), "witness", Verdict::Inconclusive { reason })
}

/// Builds a witness model from a user-supplied separating regular set `r`
/// after checking that it contains the initial set and misses the bad set.
pub fn witness_cmd(spec: &SpecFile, r: &Nfa) -> Result<Report, FrontendError> {
    let started = Instant::now();
    let (alphabet, init, bad) = match &spec.body {
        SpecBody::System(sys) => {
            let mut init = Nfa::new(sys.states.clone(), 1);
            init.add_transition(0, sys.initial, 0);
            init.accepting.insert(0);
            (sys.states.clone(), init, upward_closure_nfa(&sys.bad, sys.states.clone()))
        }
        SpecBody::Rmc(m) => (m.init.alphabet.clone(), m.init.clone(), m.bad.clone()),
        SpecBody::Rewrite(_) => {
            return Err(FrontendError::Incompatible { backend: "witness".into(), kind: spec.kind().into() })
        }
    };
    let mut sorted_r = r.alphabet.clone();
    let mut sorted_a = alphabet.clone();
    sorted_r.sort();
    sorted_a.sort();
    if sorted_r != sorted_a {
        return Err(RegularError::AlphabetMismatch { left: r.alphabet.clone(), right: alphabet }.into());
    }
    let r = r.reindex(&alphabet)?;
    let mut report = if let Some(w) = shortest_word(&product(&r, &bad, ProductMode::Intersection)?) {
        rejected(spec, format!("the invariant contains the bad word {}", format_letters(&alphabet, &w)))
    } else if !is_subset(&init, &r)? {
        let w = shortest_word(&product(&init, &r, ProductMode::Difference)?).unwrap_or_default();
        rejected(spec, format!("the invariant misses the initial word {}", format_letters(&alphabet, &w)))
    } else {
        let built = match &spec.body {
            SpecBody::System(sys) => {
                let unsafe_cone = minimal_dfa(&r).complement().to_nfa();
                witness_from_unsafe_cone(sys, &unsafe_cone).map(|m| (m, encode_param(sys)))
            }
            SpecBody::Rmc(m) => witness_from_rmc(&m.init, &m.bad, &m.trans, &r).map(|w| (w, encode_rmc(&m.init, &m.bad, &m.trans))),
            SpecBody::Rewrite(_) => unreachable!(),
        };
        match built {
            Ok((model, problem)) => {
                let mut rep = Report::new(&spec.name, spec.kind(), "witness", Verdict::Safe { certificate: CertificateKind::WitnessModel });
                rep.model = Some(model);
                rep.problem = Some(emit_native(&problem?));
                rep.invariant = Some(automaton_to_text(&r));
                rep
            }
            Err(RegularError::Validation { clause, assignment }) => {
                rejected(spec, format!("the invariant is not inductive: clause `{clause}` fails under {assignment}"))
            }
            Err(e) => return Err(e.into()),
        }
    };
    report.millis = started.elapsed().as_millis() as u64;
    Ok(report)
}
