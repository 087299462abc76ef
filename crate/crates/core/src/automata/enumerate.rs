//! Length-lexicographic enumeration of accepted words.

use alloc::vec::Vec;

use super::subset::{Bits, Prepared};
use super::{Limits, Nfa};
use crate::alphabet::Word;
use crate::error::{Error, Result};

/// All accepted words of length at most `maxlen`, in length-lexicographic
/// order.
pub fn enumerate(nfa: &Nfa, maxlen: usize, limits: Limits) -> Result<Vec<Word>> {
    let trimmed = nfa.trimmed();
    let dist = trimmed.distance_to_accept();
    let p = Prepared::new(&trimmed);
    let k = trimmed.alphabet().len();
    let mut out = Vec::new();
    let start = p.start();
    if start.is_empty() {
        return Ok(out);
    }
    // Prune subsets that cannot reach acceptance within the remaining length.
    let alive = |set: &Bits, rem: usize| set.iter().any(|s| dist[s].is_some_and(|d| d <= rem));
    let mut level: Vec<(Word, Bits)> = Vec::new();
    if alive(&start, maxlen) {
        level.push((Word::empty(), start));
    }
    for len in 0..=maxlen {
        for (w, set) in &level {
            if p.accepts(set) {
                if out.len() >= limits.max_output {
                    return Err(Error::OutputBudget { limit: limits.max_output });
                }
                out.push(w.clone());
            }
        }
        if len == maxlen {
            break;
        }
        let mut next = Vec::new();
        for (w, set) in &level {
            for sym in 0..k {
                let t = p.step(set, sym);
                if !t.is_empty() && alive(&t, maxlen - len - 1) {
                    let mut w2 = w.clone();
                    w2.push(trimmed.alphabet().symbol(sym));
                    next.push((w2, t));
                }
            }
        }
        if next.len() > limits.max_output {
            return Err(Error::OutputBudget { limit: limits.max_output });
        }
        level = next;
    }
    Ok(out)
}

/// An unbounded length-lexicographic stream of accepted words.
///
/// The stream ends when the language is exhausted or when a level of live
/// prefixes would exceed `max_frontier`; [`WordStream::truncated`] tells the
/// two apart.
pub struct WordStream {
    nfa: Nfa,
    prepared: Prepared,
    level: Vec<(Word, Bits)>,
    pos: usize,
    max_frontier: usize,
    truncated: bool,
}

impl WordStream {
    pub fn new(nfa: &Nfa, max_frontier: usize) -> Self {
        let nfa = nfa.trimmed();
        let prepared = Prepared::new(&nfa);
        let start = prepared.start();
        let level = if start.is_empty() { Vec::new() } else { alloc::vec![(Word::empty(), start)] };
        WordStream { nfa, prepared, level, pos: 0, max_frontier, truncated: false }
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn advance_level(&mut self) {
        let p = &self.prepared;
        let mut next = Vec::new();
        for (w, set) in &self.level {
            for sym in 0..self.nfa.alphabet().len() {
                let t = p.step(set, sym);
                if !t.is_empty() {
                    if next.len() >= self.max_frontier {
                        self.truncated = true;
                        self.level.clear();
                        return;
                    }
                    let mut w2 = w.clone();
                    w2.push(self.nfa.alphabet().symbol(sym));
                    next.push((w2, t));
                }
            }
        }
        self.level = next;
        self.pos = 0;
    }
}

impl Iterator for WordStream {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.level.is_empty() {
                return None;
            }
            let p = &self.prepared;
            while self.pos < self.level.len() {
                let (w, set) = &self.level[self.pos];
                self.pos += 1;
                if p.accepts(set) {
                    return Some(w.clone());
                }
            }
            self.advance_level();
        }
    }
}
