//! The prefix, suffix, infix and subword orders, finite posets of words and
//! antichain mining.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::words::{is_infix, is_prefix, is_suffix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderRelation {
    Prefix,
    Suffix,
    Infix,
    Subword,
}

impl OrderRelation {
    pub const ALL: [OrderRelation; 4] =
        [OrderRelation::Prefix, OrderRelation::Suffix, OrderRelation::Infix, OrderRelation::Subword];

    pub fn name(self) -> &'static str {
        match self {
            OrderRelation::Prefix => "prefix",
            OrderRelation::Suffix => "suffix",
            OrderRelation::Infix => "infix",
            OrderRelation::Subword => "subword",
        }
    }

    /// `u ≤ v` for this relation.
    pub fn leq(self, u: &Word, v: &Word) -> bool {
        match self {
            OrderRelation::Prefix => is_prefix(u, v),
            OrderRelation::Suffix => is_suffix(u, v),
            OrderRelation::Infix => is_infix(u, v),
            OrderRelation::Subword => is_subword(u, v),
        }
    }
}

impl fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for OrderRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prefix" => Ok(OrderRelation::Prefix),
            "suffix" => Ok(OrderRelation::Suffix),
            "infix" => Ok(OrderRelation::Infix),
            "subword" => Ok(OrderRelation::Subword),
            _ => Err(Error::Precondition(alloc::format!("unknown relation '{s}'"))),
        }
    }
}

/// Scattered subword embedding, matched greedily.
pub fn is_subword(u: &Word, v: &Word) -> bool {
    let mut it = v.iter();
    u.iter().all(|c| it.any(|d| d == c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Gt,
    Eq,
    Incomparable,
}

pub fn compare(rel: OrderRelation, u: &Word, v: &Word) -> Comparison {
    if u == v {
        Comparison::Eq
    } else if rel.leq(u, v) {
        Comparison::Lt
    } else if rel.leq(v, u) {
        Comparison::Gt
    } else {
        Comparison::Incomparable
    }
}

pub fn is_antichain(rel: OrderRelation, words: &[Word]) -> bool {
    words.iter().enumerate().all(|(i, u)| words[i + 1..].iter().all(|v| compare(rel, u, v) == Comparison::Incomparable))
}

pub const DEFAULT_POSET_CAP: usize = 64;

/// A finite set of distinct words under one of the orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<Word>,
    relation: OrderRelation,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(elements: Vec<Word>, relation: OrderRelation) -> Result<Self> {
        Self::with_cap(elements, relation, DEFAULT_POSET_CAP)
    }

    pub fn with_cap(elements: Vec<Word>, relation: OrderRelation, cap: usize) -> Result<Self> {
        if elements.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        let distinct: BTreeSet<&Word> = elements.iter().collect();
        if distinct.len() != elements.len() {
            return Err(Error::Precondition("poset elements must be distinct".into()));
        }
        let leq = elements.iter().map(|u| elements.iter().map(|v| relation.leq(u, v)).collect()).collect();
        Ok(FinitePoset { elements, relation, leq })
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn relation(&self) -> OrderRelation {
        self.relation
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    fn strict(&self) -> Vec<Vec<usize>> {
        let n = self.elements.len();
        (0..n).map(|i| (0..n).filter(|&j| i != j && self.leq[i][j]).collect()).collect()
    }

    /// Number of elements of a longest chain.
    pub fn height(&self) -> usize {
        let mut order: Vec<usize> = (0..self.elements.len()).collect();
        // A strict comparison always increases length in these orders.
        order.sort_by_key(|&i| self.elements[i].len());
        let mut best = vec![1; order.len()];
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[..a] {
                if self.leq[j][i] && j != i {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// A maximum antichain, via Dilworth's theorem and Kőnig's construction.
    pub fn maximum_antichain(&self) -> Vec<Word> {
        max_antichain_indices(&self.strict()).into_iter().map(|i| self.elements[i].clone()).collect()
    }

    pub fn width(&self) -> usize {
        self.maximum_antichain().len()
    }

    /// The elements by decreasing length: a bad sequence of full length.
    pub fn bad_sequence(&self) -> Vec<Word> {
        let mut seq = self.elements.clone();
        seq.sort_by(|a, b| b.cmp(a));
        seq
    }
}

/// Checks that no earlier element is below a later one.
pub fn is_bad_sequence(rel: OrderRelation, seq: &[Word]) -> bool {
    seq.iter().enumerate().all(|(i, u)| seq[i + 1..].iter().all(|v| !rel.leq(u, v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PosetInvariants {
    pub height: usize,
    pub width: usize,
    pub mot: usize,
}

pub fn poset_invariants(p: &FinitePoset) -> PosetInvariants {
    let seq = p.bad_sequence();
    debug_assert!(is_bad_sequence(p.relation, &seq));
    PosetInvariants { height: p.height(), width: p.width(), mot: seq.len() }
}

/// Maximum antichain of a strict partial order given by successor lists
/// (assumed transitive). Indices are returned in increasing order.
pub(crate) fn max_antichain_indices(strict: &[Vec<usize>]) -> Vec<usize> {
    let n = strict.len();
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        augment(u, strict, &mut seen, &mut match_left, &mut match_right);
    }
    // Kőnig: alternating reachability from unmatched left vertices.
    let mut zl = vec![false; n];
    let mut zr = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&u| match_left[u].is_none()).collect();
    for &u in &stack {
        zl[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &strict[u] {
            if !zr[v] && match_left[u] != Some(v) {
                zr[v] = true;
                if let Some(w) = match_right[v] {
                    if !zl[w] {
                        zl[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    // Cover = (L \ Z) ∪ (R ∩ Z); the antichain avoids it on both sides.
    (0..n).filter(|&x| zl[x] && !zr[x]).collect()
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    seen: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none() || augment(match_right[v].unwrap(), adj, seen, match_left, match_right) {
            match_left[u] = Some(v);
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// How many buffered words the maximum-antichain stage of the miner uses.
const MATCHING_WINDOW: usize = 600;

/// Result of a mining run that may fall short of its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MineOutcome {
    /// Pairwise incomparable words; `target` of them when `complete`.
    pub words: Vec<Word>,
    pub complete: bool,
    /// The stream ended before the budget, so the language was fully read.
    pub stream_ended: bool,
}

/// Extracts `target` pairwise incomparable words from a language stream,
/// reading at most `budget` words.
///
/// Three searches share the stream: words kept greedily in stream order, the
/// current length level (distinct words of equal length are incomparable in
/// all four orders), and a maximum antichain of the first buffered words,
/// recomputed each time the buffer doubles. The empty word is skipped since
/// it lies below everything.
pub fn mine_antichain<I>(stream: I, rel: OrderRelation, target: usize, budget: usize) -> Result<Vec<Word>>
where
    I: IntoIterator<Item = Word>,
{
    if target < 2 {
        return Err(Error::Precondition("antichain target must be at least 2".into()));
    }
    let out = mine(stream, rel, target, budget);
    if out.complete {
        Ok(out.words)
    } else if out.stream_ended {
        Err(Error::Precondition(alloc::format!(
            "the language is finite and its largest antichain has {} words",
            out.words.len()
        )))
    } else {
        Err(Error::Exhausted { what: "an antichain of the requested size was found", limit: budget })
    }
}

/// Like [`mine_antichain`] but returns the best antichain found when the
/// target is not reached.
pub fn mine<I>(stream: I, rel: OrderRelation, target: usize, budget: usize) -> MineOutcome
where
    I: IntoIterator<Item = Word>,
{
    let mut kept: Vec<Word> = Vec::new();
    let mut best_level: Vec<Word> = Vec::new();
    let mut level: Vec<Word> = Vec::new();
    let mut buffer: Vec<Word> = Vec::new();
    let mut best_matching: Vec<Word> = Vec::new();
    let mut checkpoint = 64.min(MATCHING_WINDOW);
    let mut examined = 0;
    let mut ended = true;
    for w in stream {
        if examined >= budget {
            ended = false;
            break;
        }
        examined += 1;
        if w.is_empty() {
            continue;
        }
        if kept.iter().all(|k| compare(rel, k, &w) == Comparison::Incomparable) {
            kept.push(w.clone());
            if kept.len() >= target {
                return MineOutcome { words: kept, complete: true, stream_ended: false };
            }
        }
        if level.first().is_some_and(|x| x.len() != w.len()) {
            if level.len() > best_level.len() {
                best_level = core::mem::take(&mut level);
            }
            level.clear();
        }
        level.push(w.clone());
        if level.len() >= target {
            return MineOutcome { words: level, complete: true, stream_ended: false };
        }
        if buffer.len() < MATCHING_WINDOW {
            buffer.push(w);
            if buffer.len() == checkpoint {
                best_matching = matching_antichain(&buffer, rel, target);
                if best_matching.len() >= target {
                    return MineOutcome { words: best_matching, complete: true, stream_ended: false };
                }
                checkpoint = (checkpoint * 2).min(MATCHING_WINDOW);
            }
        }
    }
    if buffer.len() < checkpoint {
        best_matching = matching_antichain(&buffer, rel, target);
    }
    let best = [kept, level, best_level, best_matching].into_iter().max_by_key(Vec::len).unwrap();
    let complete = best.len() >= target;
    MineOutcome { words: best, complete, stream_ended: ended }
}

/// Keeps each streamed word incomparable with all words kept so far.
///
/// On a language like `Σ*·a·b⁺·a·Σ*` this returns the structured family
/// `aba, abba, …` rather than an arbitrary level of equal-length words.
pub fn greedy_antichain<I>(stream: I, rel: OrderRelation, target: usize, budget: usize) -> MineOutcome
where
    I: IntoIterator<Item = Word>,
{
    let mut kept: Vec<Word> = Vec::new();
    let mut ended = true;
    for (examined, w) in stream.into_iter().enumerate() {
        if examined >= budget {
            ended = false;
            break;
        }
        if !w.is_empty() && kept.iter().all(|k| compare(rel, k, &w) == Comparison::Incomparable) {
            kept.push(w);
            if kept.len() >= target {
                return MineOutcome { words: kept, complete: true, stream_ended: false };
            }
        }
    }
    MineOutcome { words: kept, complete: false, stream_ended: ended }
}

/// Up to `target` words of a maximum antichain of `words`.
fn matching_antichain(words: &[Word], rel: OrderRelation, target: usize) -> Vec<Word> {
    let strict: Vec<Vec<usize>> = words
        .iter()
        .map(|u| (0..words.len()).filter(|&j| words[j] != *u && rel.leq(u, &words[j])).collect())
        .collect();
    let mut found = max_antichain_indices(&strict);
    found.sort_unstable();
    found.into_iter().take(target).map(|i| words[i].clone()).collect()
}
