//! Automaton and transducer files.
//!
//! ```text
//! # initial configurations: t n*
//! alphabet: n t
//! states: s0 s1
//! initial: s0
//! accepting: s1
//! trans: s0 t s1
//! trans: s1 n s1
//! ```
//!
//! A transducer file has the same keys, with transitions labelled
//! `input/output`, as in `trans: p t/n q`. Items are separated by whitespace
//! or commas, and `#` starts a comment.

use std::collections::BTreeSet;

use crate::regular::{Letter, Nfa, Transducer};

use super::FrontendError;

struct Item<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    items: Vec<Item<'a>>,
}

fn lines(src: &str) -> Result<Vec<Line<'_>>, FrontendError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let colon = content
            .find(':')
            .ok_or_else(|| FrontendError::parse(number, content.len() - content.trim_start().len() + 1, "expected `key: values`"))?;
        let key = content[..colon].trim();
        let mut items = Vec::new();
        let rest = &content[colon + 1..];
        let mut start = None;
        for (j, c) in rest.char_indices().chain(std::iter::once((rest.len(), ' '))) {
            let sep = c.is_whitespace() || c == ',';
            match (start, sep) {
                (None, false) => start = Some(j),
                (Some(s), true) => {
                    items.push(Item { text: &rest[s..j], column: colon + 2 + rest[..s].chars().count() });
                    start = None;
                }
                _ => {}
            }
        }
        out.push(Line { number, key, items });
    }
    Ok(out)
}

struct Parsed<'a> {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    accepting: BTreeSet<usize>,
    trans: Vec<(usize, &'a str, usize, usize, usize)>,
}

fn parse<'a>(src: &'a str, what: &str) -> Result<Parsed<'a>, FrontendError> {
    let ls = lines(src)?;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial_item: Option<(usize, usize, &str)> = None;
    let mut accepting_items = Vec::new();
    let mut raw_trans = Vec::new();
    for l in &ls {
        match l.key {
            "alphabet" | "states" => {
                let names: Vec<String> = l.items.iter().map(|i| i.text.to_string()).collect();
                let distinct: BTreeSet<&String> = names.iter().collect();
                if names.is_empty() || distinct.len() != names.len() {
                    return Err(FrontendError::parse(l.number, 1, format!("`{}` needs distinct names", l.key)));
                }
                let slot = if l.key == "alphabet" { &mut alphabet } else { &mut states };
                if slot.replace(names).is_some() {
                    return Err(FrontendError::parse(l.number, 1, format!("`{}` given twice", l.key)));
                }
            }
            "initial" => {
                if l.items.len() != 1 {
                    return Err(FrontendError::parse(l.number, 1, format!("{what} needs exactly one initial state")));
                }
                if initial_item.is_some() {
                    return Err(FrontendError::parse(l.number, 1, "`initial` given twice"));
                }
                initial_item = Some((l.number, l.items[0].column, l.items[0].text));
            }
            "accepting" => accepting_items.extend(l.items.iter().map(|i| (l.number, i.column, i.text))),
            "trans" => {
                if l.items.len() != 3 {
                    return Err(FrontendError::parse(l.number, 1, "a transition is `from label to`"));
                }
                raw_trans.push((l.number, &l.items));
            }
            other => return Err(FrontendError::parse(l.number, 1, format!("unknown key `{other}`"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| FrontendError::parse(1, 1, "missing `alphabet`"))?;
    let states = states.ok_or_else(|| FrontendError::parse(1, 1, "missing `states`"))?;
    let state = |line: usize, column: usize, name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| FrontendError::semantic(line, column, format!("unknown state `{name}`")))
    };
    let (l, c, name) = initial_item.ok_or_else(|| FrontendError::parse(1, 1, "missing `initial`"))?;
    let initial = state(l, c, name)?;
    let mut accepting = BTreeSet::new();
    for (l, c, name) in accepting_items {
        accepting.insert(state(l, c, name)?);
    }
    let mut trans = Vec::new();
    for (line, items) in raw_trans {
        let from = state(line, items[0].column, items[0].text)?;
        let to = state(line, items[2].column, items[2].text)?;
        trans.push((line, items[1].text, items[1].column, from, to));
    }
    Ok(Parsed { alphabet, states, initial, accepting, trans })
}

fn letter(alphabet: &[String], line: usize, column: usize, name: &str) -> Result<Letter, FrontendError> {
    alphabet
        .iter()
        .position(|a| a == name)
        .ok_or_else(|| FrontendError::semantic(line, column, format!("unknown letter `{name}`")))
}

pub fn parse_automaton(src: &str) -> Result<Nfa, FrontendError> {
    let p = parse(src, "an automaton")?;
    let mut nfa = Nfa::new(p.alphabet, p.states.len());
    nfa.state_names = p.states;
    nfa.initial = p.initial;
    nfa.accepting = p.accepting;
    for (line, label, column, from, to) in p.trans {
        if label.contains('/') {
            return Err(FrontendError::semantic(line, column, "automaton transitions carry a single letter"));
        }
        let a = letter(&nfa.alphabet, line, column, label)?;
        nfa.add_transition(from, a, to);
    }
    Ok(nfa)
}

pub fn parse_transducer(src: &str) -> Result<Transducer, FrontendError> {
    let p = parse(src, "a transducer")?;
    let mut t = Transducer::new(p.alphabet, p.states.len());
    t.state_names = p.states;
    t.initial = p.initial;
    t.accepting = p.accepting;
    for (line, label, column, from, to) in p.trans {
        let (i, o) = label.split_once('/').ok_or_else(|| {
            FrontendError::semantic(line, column, "transducer transitions are labelled `input/output`")
        })?;
        if i.is_empty() || o.is_empty() {
            return Err(FrontendError::semantic(
                line,
                column,
                "only letter-to-letter transitions are supported (no empty input or output)",
            ));
        }
        let a = letter(&t.alphabet, line, column, i)?;
        let b = letter(&t.alphabet, line, column + i.len() + 1, o)?;
        t.add_transition(from, a, b, to);
    }
    Ok(t)
}

fn header(out: &mut String, alphabet: &[String], states: &[String], initial: usize, accepting: &BTreeSet<usize>) {
    out.push_str(&format!("alphabet: {}\n", alphabet.join(" ")));
    out.push_str(&format!("states: {}\n", states.join(" ")));
    out.push_str(&format!("initial: {}\n", states[initial]));
    let acc: Vec<&str> = accepting.iter().map(|&s| states[s].as_str()).collect();
    out.push_str(&format!("accepting: {}\n", acc.join(" ")));
}

pub fn automaton_to_text(nfa: &Nfa) -> String {
    let mut out = String::new();
    header(&mut out, &nfa.alphabet, &nfa.state_names, nfa.initial, &nfa.accepting);
    for &(p, a, q) in &nfa.transitions {
        out.push_str(&format!("trans: {} {} {}\n", nfa.state_names[p], nfa.alphabet[a], nfa.state_names[q]));
    }
    out
}

pub fn transducer_to_text(t: &Transducer) -> String {
    let mut out = String::new();
    header(&mut out, &t.alphabet, &t.state_names, t.initial, &t.accepting);
    for &(p, a, b, q) in &t.transitions {
        out.push_str(&format!(
            "trans: {} {}/{} {}\n",
            t.state_names[p], t.alphabet[a], t.alphabet[b], t.state_names[q]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_TOKEN: &str = "# exactly one token\nalphabet: n, t\nstates: a b\ninitial: a\naccepting: b\ntrans: a n a\ntrans: a t b\ntrans: b n b\n";

    #[test]
    fn parses_and_round_trips() {
        let nfa = parse_automaton(ONE_TOKEN).unwrap();
        assert_eq!(nfa.alphabet, vec!["n", "t"]);
        assert!(nfa.accepts(&[0, 1, 0]));
        assert!(!nfa.accepts(&[1, 1]));
        assert_eq!(parse_automaton(&automaton_to_text(&nfa)).unwrap(), nfa);
    }

    #[test]
    fn transducer_labels() {
        let src = "alphabet: n t\nstates: p q r\ninitial: p\naccepting: r\ntrans: p n/n p\ntrans: p t/n q\ntrans: q n/t r\ntrans: r n/n r\n";
        let t = parse_transducer(src).unwrap();
        assert!(t.relates(&[1, 0, 0], &[0, 1, 0]));
        assert_eq!(parse_transducer(&transducer_to_text(&t)).unwrap(), t);
        let err = parse_transducer("alphabet: a\nstates: p\ninitial: p\ntrans: p a/ p\n").unwrap_err();
        assert!(err.to_string().contains("letter-to-letter"), "{err}");
    }

    #[test]
    fn diagnostics_name_position() {
        let err = parse_automaton("alphabet: a\nstates: p\ninitial: p\ntrans: p a  q\n").unwrap_err();
        assert_eq!(err.to_string(), "4:13: unknown state `q`");
        let err = parse_automaton("alphabet: a\nstates: p\ninitial: p\nfinal: p\n").unwrap_err();
        assert_eq!(err.to_string(), "4:1: unknown key `final`");
    }
}
