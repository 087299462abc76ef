//! Boundedness of regular languages: `L ⊆ w₁*⋯wₙ*`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::trim_of;
use crate::alphabet::{Alphabet, Word};
use crate::automata::{is_subset, scc, Dfa, Limits, Nfa, StateId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundednessCertificate {
    pub bounded: bool,
    /// `w₁…wₙ` with `L ⊆ w₁*⋯wₙ*` when bounded.
    pub words: Vec<Word>,
    /// Where two non-commuting cycles meet (a state or a nonterminal) and
    /// the two cycle words, when unbounded.
    pub witness: Option<(String, Word, Word)>,
}

impl BoundednessCertificate {
    pub fn n(&self) -> usize {
        self.words.len()
    }

    pub fn m(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// The automaton of `w₁*⋯wₙ*`.
pub fn bounded_cover(words: &[Word], alphabet: &Alphabet) -> Result<Nfa> {
    let mut out = Nfa::epsilon(alphabet.clone());
    for w in words {
        alphabet.check_word(w)?;
        out = out.concat(&Nfa::word(alphabet.clone(), w).star())?;
    }
    Ok(out)
}

/// A trim DFA recognises a bounded language iff each strongly connected
/// component is a single simple cycle (or a lone state without loop).
pub fn decide_bounded(dfa: &Dfa, limits: Limits) -> Result<BoundednessCertificate> {
    let d = trim_of(dfa);
    let n = d.num_states();
    let Some(q0) = d.initial() else {
        return Ok(BoundednessCertificate { bounded: true, words: Vec::new(), witness: None });
    };
    let comp = scc(&d.graph());
    let inner = |s: StateId| -> Vec<(char, StateId)> { d.successors(s).filter(|&(_, t)| comp[t] == comp[s]).collect() };

    for s in 0..n {
        let es = inner(s);
        if es.len() >= 2 {
            let back = |t: StateId| path_within(&d, &comp, t, s);
            let mut u = Word::from(vec![es[0].0]);
            u = u.concat(&back(es[0].1));
            let mut v = Word::from(vec![es[1].0]);
            v = v.concat(&back(es[1].1));
            debug_assert_ne!(u.concat(&v), v.concat(&u));
            return Ok(BoundednessCertificate { bounded: false, words: Vec::new(), witness: Some((format!("q{s}"), u, v)) });
        }
    }

    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<StateId>> = vec![Vec::new(); ncomp];
    for s in 0..n {
        members[comp[s]].push(s);
    }
    let mut words: Vec<Word> = Vec::new();
    // Tarjan numbers sinks first, so decreasing indices follow a topological order.
    for c in (0..ncomp).rev() {
        let states = &members[c];
        let is_cycle = states.len() > 1 || !inner(states[0]).is_empty();
        if is_cycle {
            let entries: Vec<StateId> = states
                .iter()
                .copied()
                .filter(|&s| s == q0 || (0..n).any(|p| comp[p] != c && d.successors(p).any(|(_, t)| t == s)))
                .collect();
            let exits: BTreeSet<StateId> = states
                .iter()
                .copied()
                .filter(|&s| d.is_accepting(s) || d.successors(s).any(|(_, t)| comp[t] != c))
                .collect();
            for &s in &entries {
                // Walk the unique cycle from s, recording the prefix at each exit.
                let mut rot = Word::empty();
                let mut partial = Vec::new();
                let mut cur = s;
                loop {
                    if exits.contains(&cur) {
                        partial.push(rot.clone());
                    }
                    let (ch, t) = inner(cur)[0];
                    rot.push(ch);
                    cur = t;
                    if cur == s {
                        break;
                    }
                }
                words.push(rot);
                words.extend(partial);
            }
        }
        let bridges: BTreeSet<char> =
            states.iter().flat_map(|&s| d.successors(s).filter(|&(_, t)| comp[t] != c).map(|(ch, _)| ch)).collect();
        words.extend(bridges.into_iter().map(|ch| Word::from(vec![ch])));
    }
    words.retain(|w| !w.is_empty());
    words.dedup();
    let lang = d.to_nfa();
    let cover = bounded_cover(&words, d.alphabet())?;
    if let Some(w) = is_subset(&lang, &cover, limits)? {
        return Err(Error::Precondition(format!("bounding words fail to cover '{}'", w.display_eps())));
    }
    // Bridge letters of acyclic stretches pile up; drop every word the cover
    // can do without, keeping the inclusion verified.
    let mut i = 0;
    while i < words.len() {
        let mut fewer = words.clone();
        fewer.remove(i);
        fewer.dedup();
        if is_subset(&lang, &bounded_cover(&fewer, d.alphabet())?, limits)?.is_none() {
            words = fewer;
        } else {
            i += 1;
        }
    }
    Ok(BoundednessCertificate { bounded: true, words, witness: None })
}

/// Least word from `from` to `to` using only states of their component.
fn path_within(d: &Dfa, comp: &[usize], from: StateId, to: StateId) -> Word {
    let mut words: Vec<Option<Word>> = vec![None; d.num_states()];
    words[from] = Some(Word::empty());
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            break;
        }
        for (c, t) in d.successors(s) {
            if comp[t] == comp[from] && words[t].is_none() {
                let mut w = words[s].clone().unwrap();
                w.push(c);
                words[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    words[to].clone().expect("states of one component are mutually reachable")
}
