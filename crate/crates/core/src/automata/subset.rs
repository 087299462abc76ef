//! Subset constructions: determinization, inclusion and difference.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{Dfa, Label, Limits, Nfa, StateId};
use crate::alphabet::Word;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// An NFA with transitions indexed by symbol, for repeated subset steps.
pub(crate) struct Prepared {
    n: usize,
    initial: Vec<StateId>,
    succ: Vec<Vec<Vec<StateId>>>,
    eps: Vec<Vec<StateId>>,
    accepting: Vec<bool>,
}

impl Prepared {
    pub(crate) fn new(nfa: &Nfa) -> Self {
        let n = nfa.num_states();
        let k = nfa.alphabet().len();
        let mut succ = vec![vec![Vec::new(); k]; n];
        let mut eps = vec![Vec::new(); n];
        for (s, l, t) in nfa.transitions() {
            match l {
                Label::Eps => eps[s].push(t),
                Label::Sym(c) => succ[s][nfa.alphabet().index_of(c).unwrap()].push(t),
            }
        }
        let mut accepting = vec![false; n];
        for &s in nfa.accepting() {
            accepting[s] = true;
        }
        Prepared { n, initial: nfa.initial().iter().copied().collect(), succ, eps, accepting }
    }

    fn close(&self, set: &mut Bits) {
        let mut stack: Vec<StateId> = set.iter().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if set.set(t) {
                    stack.push(t);
                }
            }
        }
    }

    pub(crate) fn start(&self) -> Bits {
        let mut b = Bits::new(self.n);
        for &s in &self.initial {
            b.set(s);
        }
        self.close(&mut b);
        b
    }

    pub(crate) fn step(&self, set: &Bits, sym: usize) -> Bits {
        let mut b = Bits::new(self.n);
        for s in set.iter() {
            for &t in &self.succ[s][sym] {
                b.set(t);
            }
        }
        self.close(&mut b);
        b
    }

    pub(crate) fn accepts(&self, set: &Bits) -> bool {
        set.iter().any(|s| self.accepting[s])
    }
}

/// Subset construction over the reachable, non-empty subsets, explored
/// breadth-first in symbol order. The result may be partial and is not
/// trimmed.
pub fn determinize(nfa: &Nfa, limits: Limits) -> Result<Dfa> {
    let p = Prepared::new(nfa);
    let k = nfa.alphabet().len();
    let mut dfa = Dfa::with_states(nfa.alphabet().clone(), 0);
    let start = p.start();
    if start.is_empty() {
        return Ok(dfa);
    }
    let mut ids: BTreeMap<Bits, StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), dfa.add_state());
    dfa.set_accepting(0, p.accepts(&start));
    dfa.set_initial(0);
    queue.push_back(start);
    while let Some(set) = queue.pop_front() {
        let id = ids[&set];
        for sym in 0..k {
            let next = p.step(&set, sym);
            if next.is_empty() {
                continue;
            }
            let tid = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    if ids.len() >= limits.max_states {
                        return Err(Error::StateBudget { limit: limits.max_states });
                    }
                    let t = dfa.add_state();
                    dfa.set_accepting(t, p.accepts(&next));
                    ids.insert(next.clone(), t);
                    queue.push_back(next);
                    t
                }
            };
            dfa.set_transition(id, nfa.alphabet().symbol(sym), tid)?;
        }
    }
    Ok(dfa)
}

/// Determinizes, trims and minimizes. States are numbered in breadth-first
/// order from the initial state, so equal languages give equal automata.
pub fn determinize_trim(nfa: &Nfa, limits: Limits) -> Result<Dfa> {
    let dfa = determinize(&nfa.trimmed(), limits)?;
    Ok(minimize(&dfa.trimmed()))
}

/// Moore partition refinement on a trim, partial DFA followed by a
/// canonical breadth-first renumbering.
pub(crate) fn minimize(dfa: &Dfa) -> Dfa {
    let n = dfa.num_states();
    let k = dfa.alphabet().len();
    let mut class: Vec<usize> = (0..n).map(|s| usize::from(dfa.is_accepting(s))).collect();
    let mut count = 0;
    loop {
        let mut sigs: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[s]);
            for i in 0..k {
                sig.push(dfa.step_index(s, i).map_or(usize::MAX, |t| class[t]));
            }
            let len = sigs.len();
            next[s] = *sigs.entry(sig).or_insert(len);
        }
        let new_count = sigs.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut out = Dfa::with_states(dfa.alphabet().clone(), 0);
    let Some(init) = dfa.initial() else {
        out.mark_trim();
        return out;
    };
    // Representative state of each class, visited breadth-first.
    let mut id_of_class: BTreeMap<usize, StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    id_of_class.insert(class[init], out.add_state());
    out.set_initial(0);
    queue.push_back(init);
    while let Some(s) = queue.pop_front() {
        let id = id_of_class[&class[s]];
        out.set_accepting(id, dfa.is_accepting(s));
        for i in 0..k {
            if let Some(t) = dfa.step_index(s, i) {
                let tid = match id_of_class.get(&class[t]) {
                    Some(&x) => x,
                    None => {
                        let x = out.add_state();
                        id_of_class.insert(class[t], x);
                        queue.push_back(t);
                        x
                    }
                };
                out.set_transition(id, dfa.alphabet().symbol(i), tid).unwrap();
            }
        }
    }
    out.mark_trim();
    out
}

/// Inclusion `L(a) ⊆ L(b)`. Returns `None` when it holds and otherwise the
/// length-lexicographically least word of `L(a) \ L(b)`.
pub fn is_subset(a: &Nfa, b: &Nfa, limits: Limits) -> Result<Option<Word>> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let a = a.trimmed();
    let pa = Prepared::new(&a);
    let pb = Prepared::new(b);
    let k = a.alphabet().len();
    let start = (pa.start(), pb.start());
    if start.0.is_empty() {
        return Ok(None);
    }
    // Each entry keeps its parent index and symbol to rebuild the word.
    let mut nodes: Vec<(usize, usize)> = vec![(usize::MAX, 0)];
    let mut seen: BTreeMap<(Bits, Bits), ()> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), ());
    queue.push_back((start, 0usize));
    while let Some(((sa, sb), node)) = queue.pop_front() {
        if pa.accepts(&sa) && !pb.accepts(&sb) {
            let mut syms = Vec::new();
            let mut cur = node;
            while nodes[cur].0 != usize::MAX {
                syms.push(a.alphabet().symbol(nodes[cur].1));
                cur = nodes[cur].0;
            }
            syms.reverse();
            return Ok(Some(Word::from(syms)));
        }
        for sym in 0..k {
            let na = pa.step(&sa, sym);
            if na.is_empty() {
                continue;
            }
            let key = (na, pb.step(&sb, sym));
            if seen.contains_key(&key) {
                continue;
            }
            if seen.len() >= limits.max_states {
                return Err(Error::StateBudget { limit: limits.max_states });
            }
            seen.insert(key.clone(), ());
            nodes.push((node, sym));
            queue.push_back((key, nodes.len() - 1));
        }
    }
    Ok(None)
}

/// Language equality through two inclusions.
pub fn equivalent(a: &Nfa, b: &Nfa, limits: Limits) -> Result<bool> {
    Ok(is_subset(a, b, limits)?.is_none() && is_subset(b, a, limits)?.is_none())
}

/// A trim DFA for `L(a) \ L(b)`, built lazily over pairs of subsets.
pub fn difference_dfa(a: &Nfa, b: &Nfa, limits: Limits) -> Result<Dfa> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let a = a.trimmed();
    let pa = Prepared::new(&a);
    let pb = Prepared::new(b);
    let k = a.alphabet().len();
    let mut dfa = Dfa::with_states(a.alphabet().clone(), 0);
    let start = (pa.start(), pb.start());
    if start.0.is_empty() {
        dfa.mark_trim();
        return Ok(dfa);
    }
    let mut ids: BTreeMap<(Bits, Bits), StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let s0 = dfa.add_state();
    dfa.set_initial(s0);
    dfa.set_accepting(s0, pa.accepts(&start.0) && !pb.accepts(&start.1));
    ids.insert(start.clone(), s0);
    queue.push_back(start);
    while let Some(key) = queue.pop_front() {
        let id = ids[&key];
        for sym in 0..k {
            let na = pa.step(&key.0, sym);
            if na.is_empty() {
                continue;
            }
            let next = (na, pb.step(&key.1, sym));
            let tid = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    if ids.len() >= limits.max_states {
                        return Err(Error::StateBudget { limit: limits.max_states });
                    }
                    let t = dfa.add_state();
                    dfa.set_accepting(t, pa.accepts(&next.0) && !pb.accepts(&next.1));
                    ids.insert(next.clone(), t);
                    queue.push_back(next);
                    t
                }
            };
            dfa.set_transition(id, a.alphabet().symbol(sym), tid)?;
        }
    }
    Ok(dfa.trimmed())
}
