//! Text formats for automata and automatic sequences.
//!
//! ```text
//! # a*b
//! alphabet: a b
//! states: q0 q1
//! initial: q0
//! accepting: q1
//! q0 a q0
//! q0 b q1
//! ```
//!
//! A line whose first non-blank character is `#` is a comment; `#` elsewhere
//! is an ordinary symbol, so marked languages round-trip. The label `eps`
//! is an ε-move. Automatic sequences add `base: b` and one `output: qN c`
//! line per state.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use wqo_core::automata::Label;
use wqo_core::infinite::AutomaticSequence;
use wqo_core::{Alphabet, Dfa, Nfa};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

struct Parsed {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: Vec<usize>,
    accepting: Vec<usize>,
    transitions: Vec<(usize, Label, usize, usize)>,
    base: Option<(u32, usize)>,
    outputs: Vec<(usize, char, usize)>,
}

fn single_char(token: &str) -> Option<char> {
    let mut it = token.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn parse(text: &str, extended: bool) -> Result<Parsed, FormatError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut initial_names: Vec<(String, usize)> = Vec::new();
    let mut accepting_names: Vec<(String, usize)> = Vec::new();
    let mut raw_transitions: Vec<(String, String, String, usize)> = Vec::new();
    let mut base = None;
    let mut raw_outputs: Vec<(String, String, usize)> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some((key, rest)) = trimmed.split_once(':') {
            let key = key.trim();
            let values: Vec<&str> = rest.split_whitespace().collect();
            match key {
                "alphabet" => {
                    if alphabet.is_some() {
                        return fail(lineno, "duplicate alphabet line");
                    }
                    let mut symbols = Vec::new();
                    for v in &values {
                        match single_char(v) {
                            Some(c) => symbols.push(c),
                            None => return fail(lineno, format!("symbol '{v}' is not a single character")),
                        }
                    }
                    alphabet = Some(Alphabet::new(symbols).map_err(|e| FormatError { line: lineno, message: e.to_string() })?);
                }
                "states" => {
                    for v in values {
                        if index.insert(v.to_string(), states.len()).is_some() {
                            return fail(lineno, format!("duplicate state '{v}'"));
                        }
                        states.push(v.to_string());
                    }
                }
                "initial" => initial_names.extend(values.iter().map(|v| (v.to_string(), lineno))),
                "accepting" => accepting_names.extend(values.iter().map(|v| (v.to_string(), lineno))),
                "base" if extended => {
                    let [v] = values.as_slice() else {
                        return fail(lineno, "expected 'base: b'");
                    };
                    match v.parse::<u32>() {
                        Ok(b) => base = Some((b, lineno)),
                        Err(_) => return fail(lineno, format!("bad base '{v}'")),
                    }
                }
                "output" if extended => {
                    let [s, c] = values.as_slice() else {
                        return fail(lineno, "expected 'output: state symbol'");
                    };
                    raw_outputs.push((s.to_string(), c.to_string(), lineno));
                }
                _ => return fail(lineno, format!("unknown key '{key}'")),
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [from, label, to] = tokens.as_slice() else {
            return fail(lineno, "expected 'state symbol state'");
        };
        raw_transitions.push((from.to_string(), label.to_string(), to.to_string(), lineno));
    }

    let Some(alphabet) = alphabet else {
        return fail(0, "missing alphabet line");
    };
    if states.is_empty() {
        return fail(0, "missing states line");
    }
    let lookup = |name: &str, line: usize| -> Result<usize, FormatError> {
        index.get(name).copied().ok_or_else(|| FormatError { line, message: format!("unknown state '{name}'") })
    };
    let initial = initial_names.iter().map(|(n, l)| lookup(n, *l)).collect::<Result<Vec<_>, _>>()?;
    if initial.is_empty() {
        return fail(0, "missing initial state");
    }
    let accepting = accepting_names.iter().map(|(n, l)| lookup(n, *l)).collect::<Result<Vec<_>, _>>()?;
    let mut transitions = Vec::new();
    for (from, label, to, line) in &raw_transitions {
        let label = if label == "eps" {
            Label::Eps
        } else {
            match single_char(label) {
                Some(c) if alphabet.contains(c) => Label::Sym(c),
                Some(c) => return fail(*line, format!("symbol '{c}' is not in the alphabet")),
                None => return fail(*line, format!("label '{label}' is not a single character")),
            }
        };
        transitions.push((lookup(from, *line)?, label, lookup(to, *line)?, *line));
    }
    let mut outputs = Vec::new();
    for (s, c, line) in &raw_outputs {
        let Some(c) = single_char(c) else {
            return fail(*line, format!("output '{c}' is not a single character"));
        };
        outputs.push((lookup(s, *line)?, c, *line));
    }
    Ok(Parsed { alphabet, states, initial, accepting, transitions, base, outputs })
}

pub fn parse_automaton(text: &str) -> Result<Nfa, FormatError> {
    let p = parse(text, false)?;
    let mut nfa = Nfa::new(p.alphabet);
    for _ in &p.states {
        nfa.add_state();
    }
    for s in p.initial {
        nfa.set_initial(s);
    }
    for s in p.accepting {
        nfa.set_accepting(s);
    }
    for (from, label, to, _) in p.transitions {
        nfa.add_transition(from, label, to);
    }
    Ok(nfa)
}

pub fn parse_automatic(text: &str) -> Result<AutomaticSequence, FormatError> {
    let p = parse(text, true)?;
    let Some((base, base_line)) = p.base else {
        return fail(0, "missing base line");
    };
    if p.initial.len() != 1 {
        return fail(0, "an automatic sequence needs exactly one initial state");
    }
    let mut dfa = Dfa::with_states(p.alphabet, p.states.len());
    dfa.set_initial(p.initial[0]);
    for s in p.accepting {
        dfa.set_accepting(s, true);
    }
    for (from, label, to, line) in p.transitions {
        let Label::Sym(c) = label else {
            return fail(line, "automatic sequences cannot have eps moves");
        };
        if dfa.step(from, c).is_some_and(|t| t != to) {
            return fail(line, format!("second move on '{c}' from {}", p.states[from]));
        }
        dfa.set_transition(from, c, to).map_err(|e| FormatError { line, message: e.to_string() })?;
    }
    let mut outputs = vec![None; p.states.len()];
    for (s, c, line) in p.outputs {
        if outputs[s].replace(c).is_some() {
            return fail(line, format!("second output for {}", p.states[s]));
        }
    }
    AutomaticSequence::new(base, dfa, outputs).map_err(|e| FormatError { line: base_line, message: e.to_string() })
}

/// Writes a DFA with states named `q0, q1, …` in index order. A DFA without
/// states (the trimmed empty language) becomes one dead initial state.
pub fn write_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    let symbols: Vec<String> = dfa.alphabet().iter().map(String::from).collect();
    writeln!(out, "alphabet: {}", symbols.join(" ")).unwrap();
    if dfa.num_states() == 0 || dfa.initial().is_none() {
        out.push_str("states: q0\ninitial: q0\naccepting:\n");
        return out;
    }
    let states: Vec<String> = (0..dfa.num_states()).map(|s| format!("q{s}")).collect();
    writeln!(out, "states: {}", states.join(" ")).unwrap();
    if let Some(q0) = dfa.initial() {
        writeln!(out, "initial: q{q0}").unwrap();
    }
    let accepting: Vec<String> = (0..dfa.num_states()).filter(|&s| dfa.is_accepting(s)).map(|s| format!("q{s}")).collect();
    if accepting.is_empty() {
        writeln!(out, "accepting:").unwrap();
    } else {
        writeln!(out, "accepting: {}", accepting.join(" ")).unwrap();
    }
    for s in 0..dfa.num_states() {
        for (c, t) in dfa.successors(s) {
            writeln!(out, "q{s} {c} q{t}").unwrap();
        }
    }
    out
}
