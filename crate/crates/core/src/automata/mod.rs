//! Finite automata: nondeterministic and (possibly partial) deterministic
//! carriers, plus the language algebra built on them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

mod enumerate;
mod ops;
mod subset;
mod transducer;

pub use enumerate::{enumerate, WordStream};
pub use ops::{boolean_combine, closure, BooleanOp, ClosureKind};
pub use subset::{determinize, determinize_trim, difference_dfa, equivalent, is_subset};
pub use transducer::{apply_transducer, Transducer};

pub type StateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Eps,
    Sym(char),
}

/// Resource caps shared by the constructions that may blow up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of subset states built by a determinization.
    pub max_states: usize,
    /// Maximum number of words an enumeration may produce.
    pub max_output: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 1_000_000, max_output: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    edges: Vec<Vec<(Label, StateId)>>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa { alphabet, edges: Vec::new(), initial: BTreeSet::new(), accepting: BTreeSet::new() }
    }

    /// The automaton of the empty language.
    pub fn empty(alphabet: Alphabet) -> Self {
        Nfa::new(alphabet)
    }

    /// The automaton of `{ε}`.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        let mut n = Nfa::new(alphabet);
        let s = n.add_state();
        n.set_initial(s);
        n.set_accepting(s);
        n
    }

    /// The automaton of `Σ*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut n = Nfa::epsilon(alphabet);
        for c in n.alphabet.clone().iter() {
            n.add_transition(0, Label::Sym(c), 0);
        }
        n
    }

    /// The automaton accepting exactly the given word.
    pub fn word(alphabet: Alphabet, w: &Word) -> Self {
        let mut n = Nfa::new(alphabet);
        let mut cur = n.add_state();
        n.set_initial(cur);
        for c in w.iter() {
            let next = n.add_state();
            n.add_transition(cur, Label::Sym(c), next);
            cur = next;
        }
        n.set_accepting(cur);
        n
    }

    /// The automaton of `Σ^{≤k}`, a chain of `k + 1` states without ε-moves.
    pub fn up_to_length(alphabet: Alphabet, k: usize) -> Self {
        let mut n = Nfa::new(alphabet);
        for i in 0..=k {
            n.add_state();
            n.set_accepting(i);
            if i > 0 {
                for c in n.alphabet.clone().iter() {
                    n.add_transition(i - 1, Label::Sym(c), i);
                }
            }
        }
        n.set_initial(0);
        n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn add_state(&mut self) -> StateId {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    /// Adds an edge. Panics if an endpoint is undeclared or the label is not
    /// in the alphabet; use [`Nfa::try_add_transition`] for untrusted input.
    pub fn add_transition(&mut self, from: StateId, label: Label, to: StateId) {
        self.try_add_transition(from, label, to).expect("valid transition");
    }

    pub fn try_add_transition(&mut self, from: StateId, label: Label, to: StateId) -> Result<()> {
        if from >= self.edges.len() || to >= self.edges.len() {
            return Err(Error::Malformed(alloc::format!("transition {from} -> {to} uses an undeclared state")));
        }
        if let Label::Sym(c) = label {
            if !self.alphabet.contains(c) {
                return Err(Error::UnknownSymbol(c));
            }
        }
        if !self.edges[from].contains(&(label, to)) {
            self.edges[from].push((label, to));
        }
        Ok(())
    }

    pub fn set_initial(&mut self, s: StateId) {
        assert!(s < self.edges.len());
        self.initial.insert(s);
    }

    pub fn set_accepting(&mut self, s: StateId) {
        assert!(s < self.edges.len());
        self.accepting.insert(s);
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn edges(&self, s: StateId) -> &[(Label, StateId)] {
        &self.edges[s]
    }

    /// All transitions as `(from, label, to)` triples.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Label, StateId)> + '_ {
        self.edges.iter().enumerate().flat_map(|(s, es)| es.iter().map(move |&(l, t)| (s, l, t)))
    }

    /// Same automaton over a larger alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Nfa> {
        if self.alphabet.iter().any(|c| !alphabet.contains(c)) {
            return Err(Error::AlphabetMismatch);
        }
        let mut n = self.clone();
        n.alphabet = alphabet;
        Ok(n)
    }

    pub(crate) fn eps_close(&self, set: &mut Vec<bool>) {
        let mut stack: Vec<StateId> = (0..set.len()).filter(|&s| set[s]).collect();
        while let Some(s) = stack.pop() {
            for &(l, t) in &self.edges[s] {
                if l == Label::Eps && !set[t] {
                    set[t] = true;
                    stack.push(t);
                }
            }
        }
    }

    /// Membership by simulation.
    pub fn accepts(&self, w: &Word) -> bool {
        let n = self.num_states();
        let mut cur = vec![false; n];
        for &s in &self.initial {
            cur[s] = true;
        }
        self.eps_close(&mut cur);
        for c in w.iter() {
            let mut next = vec![false; n];
            for s in 0..n {
                if cur[s] {
                    for &(l, t) in &self.edges[s] {
                        if l == Label::Sym(c) {
                            next[t] = true;
                        }
                    }
                }
            }
            self.eps_close(&mut next);
            cur = next;
        }
        self.accepting.iter().any(|&s| cur[s])
    }

    fn reach(&self, from: &BTreeSet<StateId>, backward: bool) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        if backward {
            for (s, _, t) in self.transitions() {
                rev[t].push(s);
            }
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<StateId> = from.iter().copied().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            let next: Vec<StateId> = if backward { rev[s].clone() } else { self.edges[s].iter().map(|e| e.1).collect() };
            for t in next {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States that are both reachable and co-reachable.
    pub fn useful_states(&self) -> Vec<bool> {
        let fwd = self.reach(&self.initial, false);
        let bwd = self.reach(&self.accepting, true);
        fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect()
    }

    /// Restriction to useful states, renumbered in increasing order.
    pub fn trimmed(&self) -> Nfa {
        let useful = self.useful_states();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = Nfa::new(self.alphabet.clone());
        for s in 0..self.num_states() {
            if useful[s] {
                map[s] = out.add_state();
            }
        }
        for (s, l, t) in self.transitions() {
            if useful[s] && useful[t] {
                out.add_transition(map[s], l, map[t]);
            }
        }
        for &s in &self.initial {
            if useful[s] {
                out.set_initial(map[s]);
            }
        }
        for &s in &self.accepting {
            if useful[s] {
                out.set_accepting(map[s]);
            }
        }
        out
    }

    /// Length of the shortest accepted word from each state, with ε-moves
    /// free. `None` for states that cannot reach acceptance.
    pub(crate) fn distance_to_accept(&self) -> Vec<Option<usize>> {
        let n = self.num_states();
        let mut rev: Vec<Vec<(bool, StateId)>> = vec![Vec::new(); n];
        for (s, l, t) in self.transitions() {
            rev[t].push((l == Label::Eps, s));
        }
        let mut dist: Vec<Option<usize>> = vec![None; n];
        let mut deque = alloc::collections::VecDeque::new();
        for &s in &self.accepting {
            dist[s] = Some(0);
            deque.push_back(s);
        }
        // 0-1 BFS
        while let Some(t) = deque.pop_front() {
            let d = dist[t].unwrap();
            for &(is_eps, s) in &rev[t] {
                let nd = if is_eps { d } else { d + 1 };
                if dist[s].is_none_or(|old| nd < old) {
                    dist[s] = Some(nd);
                    if is_eps {
                        deque.push_front(s);
                    } else {
                        deque.push_back(s);
                    }
                }
            }
        }
        dist
    }

    /// The length-lexicographically least accepted word, if any.
    pub fn shortest_word(&self) -> Option<Word> {
        let dist = self.distance_to_accept();
        let n = self.num_states();
        let mut cur = vec![false; n];
        for &s in &self.initial {
            cur[s] = true;
        }
        self.eps_close(&mut cur);
        let mut remaining = (0..n).filter(|&s| cur[s]).filter_map(|s| dist[s]).min()?;
        let filter = |set: &mut Vec<bool>, r: usize| {
            for s in 0..n {
                if set[s] && dist[s] != Some(r) {
                    set[s] = false;
                }
            }
        };
        filter(&mut cur, remaining);
        let mut word = Word::empty();
        while remaining > 0 {
            let mut chosen = None;
            for c in self.alphabet.iter() {
                let mut next = vec![false; n];
                for s in 0..n {
                    if cur[s] {
                        for &(l, t) in &self.edges[s] {
                            if l == Label::Sym(c) {
                                next[t] = true;
                            }
                        }
                    }
                }
                self.eps_close(&mut next);
                filter(&mut next, remaining - 1);
                if next.iter().any(|&b| b) {
                    chosen = Some((c, next));
                    break;
                }
            }
            let (c, next) = chosen.expect("distance labelling guarantees a successor");
            word.push(c);
            cur = next;
            remaining -= 1;
        }
        Some(word)
    }

    /// Emptiness test; the witness is the length-lexicographically least
    /// accepted word.
    pub fn is_empty(&self) -> (bool, Option<Word>) {
        match self.shortest_word() {
            Some(w) => (false, Some(w)),
            None => (true, None),
        }
    }

    /// Whether the language is finite: no cycle through a letter edge among
    /// useful states.
    pub fn is_finite(&self) -> bool {
        let useful = self.useful_states();
        let n = self.num_states();
        let adj: Vec<Vec<StateId>> = (0..n)
            .map(|s| if useful[s] { self.edges[s].iter().map(|e| e.1).filter(|&t| useful[t]).collect() } else { Vec::new() })
            .collect();
        let comp = scc(&adj);
        !self.transitions().any(|(s, l, t)| useful[s] && useful[t] && l != Label::Eps && comp[s] == comp[t])
    }
}

/// A deterministic automaton, possibly partial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    accepting: Vec<bool>,
    trim: bool,
}

impl Dfa {
    /// A DFA with `n` states and no transitions.
    pub fn with_states(alphabet: Alphabet, n: usize) -> Self {
        let k = alphabet.len();
        Dfa { alphabet, delta: vec![vec![None; k]; n], initial: None, accepting: vec![false; n], trim: false }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn add_state(&mut self) -> StateId {
        self.delta.push(vec![None; self.alphabet.len()]);
        self.accepting.push(false);
        self.trim = false;
        self.delta.len() - 1
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn set_initial(&mut self, s: StateId) {
        assert!(s < self.num_states());
        self.initial = Some(s);
        self.trim = false;
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn set_accepting(&mut self, s: StateId, acc: bool) {
        self.accepting[s] = acc;
        self.trim = false;
    }

    pub fn is_trim(&self) -> bool {
        self.trim
    }

    /// Sets `δ(from, c) = to`.
    pub fn set_transition(&mut self, from: StateId, c: char, to: StateId) -> Result<()> {
        let i = self.alphabet.index_of(c).ok_or(Error::UnknownSymbol(c))?;
        if from >= self.num_states() || to >= self.num_states() {
            return Err(Error::Malformed(alloc::format!("transition {from} -> {to} uses an undeclared state")));
        }
        self.delta[from][i] = Some(to);
        self.trim = false;
        Ok(())
    }

    pub fn step(&self, s: StateId, c: char) -> Option<StateId> {
        self.alphabet.index_of(c).and_then(|i| self.delta[s][i])
    }

    pub fn step_index(&self, s: StateId, i: usize) -> Option<StateId> {
        self.delta[s][i]
    }

    /// Outgoing transitions of `s` in symbol order.
    pub fn successors(&self, s: StateId) -> impl Iterator<Item = (char, StateId)> + '_ {
        self.delta[s].iter().enumerate().filter_map(move |(i, t)| t.map(|t| (self.alphabet.symbol(i), t)))
    }

    pub fn run(&self, w: &Word) -> Option<StateId> {
        let mut s = self.initial?;
        for c in w.iter() {
            s = self.step(s, c)?;
        }
        Some(s)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|s| self.accepting[s])
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone());
        for _ in 0..self.num_states() {
            n.add_state();
        }
        for s in 0..self.num_states() {
            for (c, t) in self.successors(s) {
                n.add_transition(s, Label::Sym(c), t);
            }
            if self.accepting[s] {
                n.set_accepting(s);
            }
        }
        if let Some(i) = self.initial {
            n.set_initial(i);
        }
        n
    }

    /// Removes states that are unreachable or cannot reach acceptance.
    /// State order is preserved; the empty language yields zero states.
    pub fn trimmed(&self) -> Dfa {
        let nfa = self.to_nfa();
        let useful = nfa.useful_states();
        let mut map = vec![None; self.num_states()];
        let mut count = 0;
        for s in 0..self.num_states() {
            if useful[s] {
                map[s] = Some(count);
                count += 1;
            }
        }
        let mut out = Dfa::with_states(self.alphabet.clone(), count);
        for s in 0..self.num_states() {
            if let Some(ns) = map[s] {
                for i in 0..self.alphabet.len() {
                    out.delta[ns][i] = self.delta[s][i].and_then(|t| map[t]);
                }
                out.accepting[ns] = self.accepting[s];
            }
        }
        out.initial = self.initial.and_then(|i| map[i]);
        out.trim = true;
        out
    }

    /// Adds a sink state if needed so that every transition is defined.
    pub fn completed(&self) -> Dfa {
        let mut out = self.clone();
        let partial = out.initial.is_none() || out.delta.iter().any(|row| row.iter().any(Option::is_none));
        if !partial {
            return out;
        }
        let sink = out.add_state();
        for row in out.delta.iter_mut() {
            for t in row.iter_mut() {
                if t.is_none() {
                    *t = Some(sink);
                }
            }
        }
        if out.initial.is_none() {
            out.initial = Some(sink);
        }
        out.trim = false;
        out
    }

    /// The complement with respect to `Σ*`.
    pub fn complement(&self) -> Dfa {
        let mut out = self.completed();
        for a in out.accepting.iter_mut() {
            *a = !*a;
        }
        out.trim = false;
        out
    }

    /// Same automaton with a different set of accepting states.
    pub fn with_accepting(&self, accepting: &[bool]) -> Dfa {
        assert_eq!(accepting.len(), self.num_states());
        let mut out = self.clone();
        out.accepting = accepting.to_vec();
        out.trim = false;
        out
    }

    pub(crate) fn mark_trim(&mut self) {
        self.trim = true;
    }

    /// Adjacency lists of the transition graph.
    pub fn graph(&self) -> Vec<Vec<StateId>> {
        (0..self.num_states()).map(|s| self.successors(s).map(|(_, t)| t).collect()).collect()
    }
}

/// Tarjan's algorithm, iterative. Components are numbered in reverse
/// topological order (sinks first).
pub fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
