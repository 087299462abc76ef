//! Boolean and rational operations and downward closures.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::subset::difference_dfa;
use super::{Label, Limits, Nfa, StateId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Intersection,
    Difference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosureKind {
    Prefix,
    Suffix,
    Infix,
    Subword,
}

pub fn boolean_combine(op: BooleanOp, a: &Nfa, b: &Nfa, limits: Limits) -> Result<Nfa> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(match op {
        BooleanOp::Union => a.union(b)?,
        BooleanOp::Intersection => a.intersection(b)?,
        BooleanOp::Difference => difference_dfa(a, b, limits)?.to_nfa(),
    })
}

impl Nfa {
    /// Copies the states and edges of `other` into `self`, returning the
    /// offset of the copy.
    fn embed(&mut self, other: &Nfa) -> StateId {
        let off = self.num_states();
        for _ in 0..other.num_states() {
            self.add_state();
        }
        for (s, l, t) in other.transitions() {
            self.add_transition(s + off, l, t + off);
        }
        off
    }

    fn check_same(&self, other: &Nfa) -> Result<()> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    /// Disjoint union.
    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        self.check_same(other)?;
        let mut out = self.clone();
        let off = out.embed(other);
        for &s in other.initial() {
            out.set_initial(s + off);
        }
        for &s in other.accepting() {
            out.set_accepting(s + off);
        }
        Ok(out)
    }

    /// Product construction; ε-moves advance one side at a time.
    pub fn intersection(&self, other: &Nfa) -> Result<Nfa> {
        self.check_same(other)?;
        let mut out = Nfa::new(self.alphabet().clone());
        let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut get = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId)>, key: (StateId, StateId)| {
            *ids.entry(key).or_insert_with(|| {
                queue.push_back(key);
                out.add_state()
            })
        };
        for &p in self.initial() {
            for &q in other.initial() {
                let id = get(&mut out, &mut queue, (p, q));
                out.set_initial(id);
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let id = get(&mut out, &mut queue, (p, q));
            if self.accepting().contains(&p) && other.accepting().contains(&q) {
                out.set_accepting(id);
            }
            for &(l, p2) in self.edges(p) {
                if l == Label::Eps {
                    let t = get(&mut out, &mut queue, (p2, q));
                    out.add_transition(id, Label::Eps, t);
                }
            }
            for &(l, q2) in other.edges(q) {
                if l == Label::Eps {
                    let t = get(&mut out, &mut queue, (p, q2));
                    out.add_transition(id, Label::Eps, t);
                }
            }
            for &(l1, p2) in self.edges(p) {
                if let Label::Sym(c) = l1 {
                    for &(l2, q2) in other.edges(q) {
                        if l2 == l1 {
                            let t = get(&mut out, &mut queue, (p2, q2));
                            out.add_transition(id, Label::Sym(c), t);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa> {
        self.check_same(other)?;
        let mut out = Nfa::new(self.alphabet().clone());
        let off1 = out.embed(self);
        let off2 = out.embed(other);
        for &s in self.initial() {
            out.set_initial(s + off1);
        }
        for &f in self.accepting() {
            for &s in other.initial() {
                out.add_transition(f + off1, Label::Eps, s + off2);
            }
        }
        for &f in other.accepting() {
            out.set_accepting(f + off2);
        }
        Ok(out)
    }

    pub fn star(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet().clone());
        let hub = out.add_state();
        let off = out.embed(self);
        out.set_initial(hub);
        out.set_accepting(hub);
        for &s in self.initial() {
            out.add_transition(hub, Label::Eps, s + off);
        }
        for &f in self.accepting() {
            out.add_transition(f + off, Label::Eps, hub);
        }
        out
    }

    /// Letter-by-letter reversal.
    pub fn reverse(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet().clone());
        for _ in 0..self.num_states() {
            out.add_state();
        }
        for (s, l, t) in self.transitions() {
            out.add_transition(t, l, s);
        }
        for &s in self.accepting() {
            out.set_initial(s);
        }
        for &s in self.initial() {
            out.set_accepting(s);
        }
        out
    }

    /// Downward closure for the given relation.
    pub fn closure(&self, kind: ClosureKind) -> Nfa {
        closure(kind, self)
    }
}

/// Downward closure: prefix makes every useful state accepting, suffix makes
/// every useful state initial, infix does both, subword adds an ε-copy of
/// every letter edge.
pub fn closure(kind: ClosureKind, nfa: &Nfa) -> Nfa {
    let mut out = nfa.trimmed();
    let n = out.num_states();
    match kind {
        ClosureKind::Prefix => (0..n).for_each(|s| out.set_accepting(s)),
        ClosureKind::Suffix => (0..n).for_each(|s| out.set_initial(s)),
        ClosureKind::Infix => (0..n).for_each(|s| {
            out.set_accepting(s);
            out.set_initial(s);
        }),
        ClosureKind::Subword => {
            let letters: Vec<(StateId, StateId)> =
                out.transitions().filter(|(_, l, _)| *l != Label::Eps).map(|(s, _, t)| (s, t)).collect();
            for (s, t) in letters {
                out.add_transition(s, Label::Eps, t);
            }
        }
    }
    out
}
