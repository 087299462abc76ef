//! Intersection of a context-free grammar with a regular language.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Cfg, Symbol};
use crate::automata::{Dfa, Limits, StateId};
use crate::error::{Error, Result};

/// Right-hand sides of a grammar with at most two symbols, terminals only
/// alone.
#[derive(Clone, Copy, Debug)]
enum Rhs {
    Eps,
    T(char),
    Unit(usize),
    Pair(usize, usize),
}

struct Binary {
    rules: Vec<(usize, Rhs)>,
    count: usize,
}

fn binarize(g: &Cfg) -> Binary {
    let mut count = g.num_nonterminals();
    let mut rules = Vec::new();
    let mut wrap: BTreeMap<char, usize> = BTreeMap::new();
    let mut as_nonterminal = |s: Symbol, rules: &mut Vec<(usize, Rhs)>, count: &mut usize| match s {
        Symbol::N(n) => n,
        Symbol::T(c) => *wrap.entry(c).or_insert_with(|| {
            *count += 1;
            rules.push((*count - 1, Rhs::T(c)));
            *count - 1
        }),
    };
    for p in g.productions() {
        match p.rhs.as_slice() {
            [] => rules.push((p.lhs, Rhs::Eps)),
            [Symbol::T(c)] => rules.push((p.lhs, Rhs::T(*c))),
            [Symbol::N(n)] => rules.push((p.lhs, Rhs::Unit(*n))),
            rhs => {
                let ids: Vec<usize> = rhs.iter().map(|&s| as_nonterminal(s, &mut rules, &mut count)).collect();
                // A -> X1 H1, H1 -> X2 H2, ..., H_{k-2} -> X_{k-1} X_k
                let mut lhs = p.lhs;
                for i in 0..ids.len() - 2 {
                    count += 1;
                    rules.push((lhs, Rhs::Pair(ids[i], count - 1)));
                    lhs = count - 1;
                }
                rules.push((lhs, Rhs::Pair(ids[ids.len() - 2], ids[ids.len() - 1])));
            }
        }
    }
    Binary { rules, count }
}

/// The triple construction: nonterminals `(p, A, q)` derive the words of
/// `A` that lead the DFA from `p` to `q`. Only productive triples are built;
/// the result is reduced.
pub fn cfg_intersect_regular(g: &Cfg, d: &Dfa, limits: Limits) -> Result<Cfg> {
    if g.terminals() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let d = if d.is_trim() { d.clone() } else { d.trimmed() };
    let mut out = Cfg::new(g.terminals().clone(), "Start");
    out.reduced = true;
    let Some(q0) = d.initial() else {
        return Ok(out);
    };
    let b = binarize(g);
    let n = d.num_states();
    let idx = |a: usize, p: StateId, q: StateId| (a * n + p) * n + q;
    let mut productive = vec![false; b.count * n * n];
    // succ[a][p] lists q with (p, a, q) productive; pred[a][q] lists p.
    let mut succ: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); n]; b.count];
    let mut pred: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); n]; b.count];
    let mut by_first: Vec<Vec<(usize, Rhs)>> = vec![Vec::new(); b.count];
    let mut by_second: Vec<Vec<(usize, usize)>> = vec![Vec::new(); b.count];
    for &(lhs, rhs) in &b.rules {
        match rhs {
            Rhs::Unit(x) => by_first[x].push((lhs, rhs)),
            Rhs::Pair(x, y) => {
                by_first[x].push((lhs, rhs));
                by_second[y].push((lhs, x));
            }
            _ => {}
        }
    }
    let mut queue: VecDeque<(usize, StateId, StateId)> = VecDeque::new();
    let mut found = 0usize;
    let mut add = |a: usize, p: StateId, q: StateId, queue: &mut VecDeque<_>| -> Result<()> {
        if !productive[idx(a, p, q)] {
            productive[idx(a, p, q)] = true;
            found += 1;
            if found > limits.max_states {
                return Err(Error::StateBudget { limit: limits.max_states });
            }
            queue.push_back((a, p, q));
        }
        Ok(())
    };
    for &(lhs, rhs) in &b.rules {
        for p in 0..n {
            match rhs {
                Rhs::Eps => add(lhs, p, p, &mut queue)?,
                Rhs::T(c) => {
                    if let Some(q) = d.step(p, c) {
                        add(lhs, p, q, &mut queue)?;
                    }
                }
                _ => {}
            }
        }
    }
    while let Some((x, p, r)) = queue.pop_front() {
        succ[x][p].push(r);
        pred[x][r].push(p);
        for &(lhs, rhs) in &by_first[x] {
            match rhs {
                Rhs::Unit(_) => add(lhs, p, r, &mut queue)?,
                Rhs::Pair(_, y) => {
                    for q in succ[y][r].clone() {
                        add(lhs, p, q, &mut queue)?;
                    }
                }
                _ => {}
            }
        }
        for &(lhs, z) in &by_second[x] {
            for o in pred[z][p].clone() {
                add(lhs, o, r, &mut queue)?;
            }
        }
    }
    let is_prod = |a: usize, p: StateId, q: StateId| productive[idx(a, p, q)];

    // Emit productions top-down from the start triples.
    let mut ids: BTreeMap<(usize, StateId, StateId), usize> = BTreeMap::new();
    let mut todo: Vec<(usize, StateId, StateId)> = Vec::new();
    let mut id_of = |t: (usize, StateId, StateId), out: &mut Cfg, todo: &mut Vec<_>| -> usize {
        *ids.entry(t).or_insert_with(|| {
            todo.push(t);
            let base = if t.0 < g.num_nonterminals() { g.name(t.0) } else { "H" };
            out.fresh_nonterminal(&format!("{base}_{}_{}", t.1, t.2))
        })
    };
    let start = out.start();
    for f in 0..n {
        if d.is_accepting(f) && is_prod(g.start(), q0, f) {
            let t = id_of((g.start(), q0, f), &mut out, &mut todo);
            out.add_production(start, vec![Symbol::N(t)])?;
        }
    }
    while let Some((a, p, q)) = todo.pop() {
        let me = id_of((a, p, q), &mut out, &mut todo);
        for &(lhs, rhs) in b.rules.iter().filter(|r| r.0 == a) {
            debug_assert_eq!(lhs, a);
            match rhs {
                Rhs::Eps if p == q => out.add_production(me, Vec::new())?,
                Rhs::T(c) if d.step(p, c) == Some(q) => out.add_production(me, vec![Symbol::T(c)])?,
                Rhs::Unit(x) if is_prod(x, p, q) => {
                    let t = id_of((x, p, q), &mut out, &mut todo);
                    out.add_production(me, vec![Symbol::N(t)])?;
                }
                Rhs::Pair(x, y) => {
                    for r in 0..n {
                        if is_prod(x, p, r) && is_prod(y, r, q) {
                            let tx = id_of((x, p, r), &mut out, &mut todo);
                            let ty = id_of((y, r, q), &mut out, &mut todo);
                            out.add_production(me, vec![Symbol::N(tx), Symbol::N(ty)])?;
                        }
                    }
                }
                _ => {}
            }
        }
    }
    out.reduced = true;
    Ok(out)
}
