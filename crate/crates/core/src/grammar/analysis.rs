//! Boundedness, subword closure and the wqo decisions for grammars.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{cfg_enumerate, cfg_intersect_regular, cfg_is_empty, reduce_cfg, Cfg, Symbol};
use crate::alphabet::{Alphabet, Word};
use crate::automata::{determinize, determinize_trim, difference_dfa, scc, Label, Limits, Nfa, StateId};
use crate::decision::{
    bounded_cover, decide_bounded, decide_subword, r_periods, Bound, BoundednessCertificate, Certificate,
    DecisionConfig, DecisionReport, OrdinalBounds, RBounds, Verdict,
};
use crate::error::{Error, Result};
use crate::order::{greedy_antichain, mine, OrderRelation};
use crate::ordinal::OrdinalExpr;

/// Elementary cycles followed from each first edge when sampling pumps.
const CYCLES_PER_EDGE: usize = 64;

/// Up to two length-lex least words per nonterminal.
fn sample_words(g: &Cfg) -> Vec<Vec<Word>> {
    let mut best: Vec<Vec<Word>> = vec![Vec::new(); g.num_nonterminals()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let mut partial: Vec<Word> = vec![Word::empty()];
            for &s in &p.rhs {
                let options: &[Word] = match s {
                    Symbol::T(_) => &[],
                    Symbol::N(n) => &best[n],
                };
                let mut next: BTreeSet<Word> = BTreeSet::new();
                for w in &partial {
                    match s {
                        Symbol::T(c) => {
                            let mut w = w.clone();
                            w.push(c);
                            next.insert(w);
                        }
                        Symbol::N(_) => {
                            for o in options {
                                next.insert(w.concat(o));
                            }
                        }
                    }
                }
                partial = next.into_iter().take(2).collect();
                if partial.is_empty() {
                    break;
                }
            }
            let mut merged: BTreeSet<Word> = best[p.lhs].iter().cloned().collect();
            merged.extend(partial);
            let merged: Vec<Word> = merged.into_iter().take(2).collect();
            if merged != best[p.lhs] {
                best[p.lhs] = merged;
                changed = true;
            }
        }
    }
    best
}

/// Pumps `A ⇒* x A y` read off elementary cycles of the grammar graph, with
/// side nonterminals replaced by short words. Returns `(A, x, y)` triples.
pub fn pump_pairs(g: &Cfg) -> Vec<(usize, Word, Word)> {
    let samples = sample_words(g);
    let edges: Vec<Vec<(usize, usize, usize)>> = (0..g.num_nonterminals())
        .map(|a| {
            let mut out = Vec::new();
            for (pi, p) in g.productions().iter().enumerate().filter(|(_, p)| p.lhs == a) {
                for (j, &s) in p.rhs.iter().enumerate() {
                    if let Symbol::N(b) = s {
                        out.push((pi, j, b));
                    }
                }
            }
            out
        })
        .collect();
    let mut pumps = Vec::new();
    for a in 0..g.num_nonterminals() {
        for &first in &edges[a] {
            let mut found = 0;
            let mut path = vec![(first.0, first.1)];
            let mut on_path = vec![false; g.num_nonterminals()];
            on_path[a] = true;
            cycles_from(a, first.2, &edges, &mut path, &mut on_path, &mut found, &mut |cycle| {
                pumps.extend(cycle_pumps(g, &samples, cycle).into_iter().map(|(x, y)| (a, x, y)));
            });
        }
    }
    pumps
}

fn cycles_from(
    target: usize,
    at: usize,
    edges: &[Vec<(usize, usize, usize)>],
    path: &mut Vec<(usize, usize)>,
    on_path: &mut [bool],
    found: &mut usize,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if *found >= CYCLES_PER_EDGE {
        return;
    }
    if at == target {
        *found += 1;
        emit(path);
        return;
    }
    if on_path[at] {
        return;
    }
    on_path[at] = true;
    for &(pi, j, b) in &edges[at] {
        path.push((pi, j));
        cycles_from(target, b, edges, path, on_path, found, emit);
        path.pop();
    }
    on_path[at] = false;
}

/// The pump of a cycle using each side nonterminal's least word, and one
/// variant per side occurrence using its second word.
fn cycle_pumps(g: &Cfg, samples: &[Vec<Word>], cycle: &[(usize, usize)]) -> Vec<(Word, Word)> {
    let side = |variant: Option<(usize, usize)>| -> Option<(Word, Word)> {
        let mut x = Word::empty();
        let mut ys: Vec<Word> = Vec::new();
        for (k, &(pi, j)) in cycle.iter().enumerate() {
            let rhs = &g.productions()[pi].rhs;
            let render = |range: core::ops::Range<usize>| -> Option<Word> {
                let mut w = Word::empty();
                for i in range {
                    match rhs[i] {
                        Symbol::T(c) => w.push(c),
                        Symbol::N(n) => {
                            let pick = if variant == Some((k, i)) { 1 } else { 0 };
                            w = w.concat(samples[n].get(pick)?);
                        }
                    }
                }
                Some(w)
            };
            x = x.concat(&render(0..j)?);
            ys.push(render(j + 1..rhs.len())?);
        }
        let y = ys.iter().rev().fold(Word::empty(), |acc, v| acc.concat(v));
        Some((x, y))
    };
    let mut out: Vec<(Word, Word)> = side(None).into_iter().collect();
    for (k, &(pi, j)) in cycle.iter().enumerate() {
        for (i, &s) in g.productions()[pi].rhs.iter().enumerate() {
            if i != j && matches!(s, Symbol::N(n) if samples[n].len() > 1) {
                out.extend(side(Some((k, i))));
            }
        }
    }
    out
}

fn non_commuting(words: &[&Word]) -> Option<(Word, Word)> {
    let first = words.iter().find(|w| !w.is_empty())?;
    words
        .iter()
        .find(|w| first.concat(w) != w.concat(first))
        .map(|w| ((*first).clone(), (*w).clone()))
}

/// Nonterminal graph components, dependencies before dependents.
struct Components {
    comp: Vec<usize>,
    members: Vec<Vec<usize>>,
}

fn components(g: &Cfg) -> Components {
    let adj: Vec<Vec<usize>> = (0..g.num_nonterminals())
        .map(|a| {
            let set: BTreeSet<usize> = g
                .productions_of(a)
                .flat_map(|p| p.rhs.iter().filter_map(|s| if let Symbol::N(b) = *s { Some(b) } else { None }))
                .collect();
            set.into_iter().collect()
        })
        .collect();
    let comp = scc(&adj);
    let n = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); n];
    for (a, &c) in comp.iter().enumerate() {
        members[c].push(a);
    }
    Components { comp, members }
}

impl Components {
    fn occurrences(&self, rhs: &[Symbol], c: usize) -> usize {
        rhs.iter().filter(|s| matches!(**s, Symbol::N(b) if self.comp[b] == c)).count()
    }

    fn is_recursive(&self, g: &Cfg, c: usize) -> bool {
        self.members[c].len() > 1 || g.productions_of(self.members[c][0]).any(|p| self.occurrences(&p.rhs, c) > 0)
    }
}

/// Copies `piece` into `into` between `from` and `to` with ε moves.
fn embed(into: &mut Nfa, piece: &Nfa, from: StateId, to: StateId) {
    let offset = into.num_states();
    for _ in 0..piece.num_states() {
        into.add_state();
    }
    for (s, l, t) in piece.transitions() {
        into.add_transition(s + offset, l, t + offset);
    }
    for &i in piece.initial() {
        into.add_transition(from, Label::Eps, i + offset);
    }
    for &f in piece.accepting() {
        into.add_transition(f + offset, Label::Eps, to);
    }
}

fn flatten(symbols: &[Symbol], seq: &[Option<Vec<Word>>]) -> Vec<Word> {
    let mut out = Vec::new();
    for &s in symbols {
        match s {
            Symbol::T(c) => out.push(Word::from(vec![c])),
            Symbol::N(n) => out.extend(seq[n].iter().flatten().cloned()),
        }
    }
    out
}

/// Terminals exactly, nonterminals by their approximations.
fn concat_approx(symbols: &[Symbol], approx: &[Option<Nfa>], alphabet: &Alphabet) -> Result<Nfa> {
    let mut out = Nfa::epsilon(alphabet.clone());
    for &s in symbols {
        out = match s {
            Symbol::T(c) => out.concat(&Nfa::word(alphabet.clone(), &Word::from(vec![c])))?,
            Symbol::N(n) => out.concat(approx[n].as_ref().expect("components are processed bottom-up"))?,
        };
    }
    Ok(out)
}

fn bounding_words(nfa: &Nfa, limits: Limits) -> Result<Vec<Word>> {
    let d = determinize_trim(nfa, limits)?;
    let cert = decide_bounded(&d, limits)?;
    if !cert.bounded {
        return Err(Error::Undetermined("a recursion context of the grammar is not bounded".into()));
    }
    Ok(cert.words)
}

/// Boundedness of a context-free language.
///
/// Pumps `A ⇒* xAy` that fail to commute (among the `x` parts or among the
/// `y` parts of one nonterminal) prove the language unbounded. Otherwise
/// candidate words are assembled component by component and the inclusion
/// `L ⊆ w₁*⋯wₙ*` is checked by intersecting with the complement; a failed
/// check is reported as [`Error::Undetermined`].
pub fn cfg_bounded(g: &Cfg, limits: Limits) -> Result<BoundednessCertificate> {
    let g = reduce_cfg(g);
    if g.productions().is_empty() {
        return Ok(BoundednessCertificate { bounded: true, words: Vec::new(), witness: None });
    }
    let pumps = pump_pairs(&g);
    for a in 0..g.num_nonterminals() {
        let xs: Vec<&Word> = pumps.iter().filter(|p| p.0 == a).map(|p| &p.1).collect();
        let ys: Vec<&Word> = pumps.iter().filter(|p| p.0 == a).map(|p| &p.2).collect();
        if let Some((u, v)) = non_commuting(&xs).or_else(|| non_commuting(&ys)) {
            return Ok(BoundednessCertificate { bounded: false, words: Vec::new(), witness: Some((g.name(a).into(), u, v)) });
        }
    }

    let alphabet = g.terminals().clone();
    let cs = components(&g);
    let mut seq: Vec<Option<Vec<Word>>> = vec![None; g.num_nonterminals()];
    // Over-approximations of each finished nonterminal: exact without
    // recursion, the bounded cover of `seq` otherwise.
    let mut approx: Vec<Option<Nfa>> = vec![None; g.num_nonterminals()];
    for c in 0..cs.members.len() {
        let members = &cs.members[c];
        if !cs.is_recursive(&g, c) {
            let a = members[0];
            seq[a] = Some(g.productions_of(a).flat_map(|p| flatten(&p.rhs, &seq)).collect());
            let mut union = Nfa::empty(alphabet.clone());
            for p in g.productions_of(a) {
                union = union.union(&concat_approx(&p.rhs, &approx, &alphabet)?)?;
            }
            approx[a] = Some(union);
            continue;
        }
        let exits: Vec<&super::Production> =
            members.iter().flat_map(|&m| g.productions_of(m)).filter(|p| cs.occurrences(&p.rhs, c) == 0).collect();
        let mid: Vec<Word> = exits.iter().flat_map(|p| flatten(&p.rhs, &seq)).collect();
        let linear = members.iter().flat_map(|&m| g.productions_of(m)).all(|p| cs.occurrences(&p.rhs, c) <= 1);
        if linear {
            let index = |a: usize| members.iter().position(|&m| m == a).unwrap();
            let exit_states: BTreeSet<usize> = exits.iter().map(|p| index(p.lhs)).collect();
            let piece = |symbols: &[Symbol]| concat_approx(symbols, &approx, &alphabet);
            let mut results = Vec::new();
            for &a in members {
                let mut left = Nfa::new(alphabet.clone());
                let mut right = Nfa::new(alphabet.clone());
                for _ in members {
                    left.add_state();
                    right.add_state();
                }
                left.set_initial(index(a));
                right.set_accepting(index(a));
                for &e in &exit_states {
                    left.set_accepting(e);
                    right.set_initial(e);
                }
                for &m in members {
                    for p in g.productions_of(m) {
                        let Some(j) = p.rhs.iter().position(|s| matches!(*s, Symbol::N(b) if cs.comp[b] == c)) else {
                            continue;
                        };
                        let Symbol::N(next) = p.rhs[j] else { unreachable!() };
                        embed(&mut left, &piece(&p.rhs[..j])?, index(m), index(next));
                        embed(&mut right, &piece(&p.rhs[j + 1..])?, index(next), index(m));
                    }
                }
                let mut words = bounding_words(&left, limits)?;
                words.extend(mid.iter().cloned());
                words.extend(bounding_words(&right, limits)?);
                results.push((a, words));
            }
            for (a, words) in results {
                approx[a] = Some(bounded_cover(&words, &alphabet)?);
                seq[a] = Some(words);
            }
        } else {
            // Every word here is a factor of r* for the common root r of the pumps.
            let root = pumps
                .iter()
                .filter(|p| cs.comp[p.0] == c)
                .flat_map(|p| [&p.1, &p.2])
                .find(|w| !w.is_empty())
                .map(crate::words::primitive_root);
            let words = match root {
                Some(r) => {
                    let k = r.len();
                    let mut ws: Vec<Word> = (1..k).map(|i| r.slice(i, k)).collect();
                    ws.push(r.clone());
                    ws.extend((1..k).map(|i| r.slice(0, i)));
                    for i in 1..k {
                        for j in i + 1..k {
                            ws.push(r.slice(i, j));
                        }
                    }
                    ws.extend(mid.iter().cloned());
                    ws
                }
                None => mid.clone(),
            };
            for &a in members {
                approx[a] = Some(bounded_cover(&words, &alphabet)?);
                seq[a] = Some(words.clone());
            }
        }
    }
    let mut words = seq[g.start()].take().unwrap_or_default();
    words.retain(|w| !w.is_empty());
    words.dedup();
    let cover = bounded_cover(&words, &alphabet)?;
    let outside = determinize(&cover, limits)?.complement();
    if let (false, Some(w)) = cfg_is_empty(&cfg_intersect_regular(&g, &outside, limits)?) {
        return Err(Error::Undetermined(format!(
            "'{}' escapes the candidate bounding words",
            w.display_eps()
        )));
    }
    Ok(BoundednessCertificate { bounded: true, words, witness: None })
}

fn letters_star(alphabet: &Alphabet, letters: &BTreeSet<char>) -> Nfa {
    let mut n = Nfa::new(alphabet.clone());
    let s = n.add_state();
    n.set_initial(s);
    n.set_accepting(s);
    for &c in letters {
        n.add_transition(s, Label::Sym(c), s);
    }
    n
}

/// Letters occurring in words derived from each nonterminal.
fn letters(g: &Cfg) -> Vec<BTreeSet<char>> {
    let mut out: Vec<BTreeSet<char>> = vec![BTreeSet::new(); g.num_nonterminals()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            for &s in &p.rhs {
                let add: Vec<char> = match s {
                    Symbol::T(c) => vec![c],
                    Symbol::N(n) => out[n].iter().copied().collect(),
                };
                for c in add {
                    changed |= out[p.lhs].insert(c);
                }
            }
        }
    }
    out
}

/// An automaton for the set of subwords of words of `L(g)`.
///
/// Components of the nonterminal graph are handled bottom-up. Without
/// recursion a nonterminal's closure is the union over its productions of
/// the concatenated closures. In a recursive component every member has the
/// closure `Γ_L* · M · Γ_R*`, where `Γ_L` (`Γ_R`) are the letters that can
/// appear left (right) of a recursive occurrence and `M` is the closure of
/// the productions leaving the component.
pub fn cfg_subword_closure(g: &Cfg, limits: Limits) -> Result<Nfa> {
    let g = reduce_cfg(g);
    let alphabet = g.terminals().clone();
    if g.productions().is_empty() {
        return Ok(Nfa::empty(alphabet));
    }
    let alph = letters(&g);
    let cs = components(&g);
    let mut down: Vec<Option<Nfa>> = vec![None; g.num_nonterminals()];
    let concat_of = |rhs: &[Symbol], down: &[Option<Nfa>]| -> Result<Nfa> {
        let mut out = Nfa::epsilon(alphabet.clone());
        for &s in rhs {
            let part = match s {
                Symbol::T(c) => Nfa::word(alphabet.clone(), &Word::from(vec![c])).union(&Nfa::epsilon(alphabet.clone()))?,
                Symbol::N(n) => down[n].clone().expect("dependencies are processed first"),
            };
            out = out.concat(&part)?;
        }
        Ok(out)
    };
    let symbol_letters = |s: Symbol| -> BTreeSet<char> {
        match s {
            Symbol::T(c) => BTreeSet::from([c]),
            Symbol::N(n) => alph[n].clone(),
        }
    };
    for c in 0..cs.members.len() {
        let members = &cs.members[c];
        let result = if !cs.is_recursive(&g, c) {
            let mut out = Nfa::empty(alphabet.clone());
            for p in g.productions_of(members[0]) {
                out = out.union(&concat_of(&p.rhs, &down)?)?;
            }
            out
        } else {
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            let mut mid = Nfa::empty(alphabet.clone());
            for p in members.iter().flat_map(|&m| g.productions_of(m)) {
                let occ: Vec<usize> = (0..p.rhs.len())
                    .filter(|&i| matches!(p.rhs[i], Symbol::N(b) if cs.comp[b] == c))
                    .collect();
                if occ.is_empty() {
                    mid = mid.union(&concat_of(&p.rhs, &down)?)?;
                }
                for &i in &occ {
                    p.rhs[..i].iter().for_each(|&s| left.extend(symbol_letters(s)));
                    p.rhs[i + 1..].iter().for_each(|&s| right.extend(symbol_letters(s)));
                }
            }
            letters_star(&alphabet, &left).concat(&mid)?.concat(&letters_star(&alphabet, &right))?
        };
        let small = determinize_trim(&result, limits)?.to_nfa();
        for &m in members {
            down[m] = Some(small.clone());
        }
    }
    Ok(down[g.start()].take().unwrap())
}

/// The infix, prefix or suffix decision for a context-free language.
///
/// Infix runs the bounded-language pipeline: boundedness, the subword
/// closure for `n0`, and `L ⊆ R` as emptiness of `L` intersected with the
/// complement of `R`. Prefix reduces to infix on `#L`; suffix works on the
/// mirror grammar.
pub fn decide_cfg(g: &Cfg, rel: OrderRelation, config: &DecisionConfig) -> Result<DecisionReport> {
    match rel {
        OrderRelation::Subword => Ok(decide_subword()),
        OrderRelation::Infix => decide_cfg_infix(g, config),
        OrderRelation::Prefix => {
            let marker = ['#', '$', '%', '&', '@', '!']
                .into_iter()
                .find(|&m| !g.terminals().contains(m))
                .ok_or(Error::MarkerPresent('#'))?;
            let mut report = decide_cfg_infix(&g.with_marker(marker)?, config)?;
            report.relation = OrderRelation::Prefix;
            map_certificate(&mut report.certificate, &|w: &Word| {
                if w.as_slice().first() == Some(&marker) {
                    w.slice(1, w.len())
                } else {
                    w.clone()
                }
            });
            Ok(report)
        }
        OrderRelation::Suffix => {
            let mut report = decide_cfg(&g.reversed(), OrderRelation::Prefix, config)?;
            report.relation = OrderRelation::Suffix;
            map_certificate(&mut report.certificate, &Word::reversed);
            Ok(report)
        }
    }
}

fn map_certificate(cert: &mut Certificate, f: &dyn Fn(&Word) -> Word) {
    match cert {
        Certificate::AntichainSample { words } => words.iter_mut().for_each(|w| *w = f(w)),
        Certificate::Unboundedness { u, v, antichain, .. } => {
            *u = f(u);
            *v = f(v);
            antichain.iter_mut().for_each(|w| *w = f(w));
        }
        Certificate::EscapeWord { word, antichain, .. } => {
            *word = f(word);
            antichain.iter_mut().for_each(|w| *w = f(w));
        }
        _ => {}
    }
}

fn decide_cfg_infix(g: &Cfg, config: &DecisionConfig) -> Result<DecisionReport> {
    let g = reduce_cfg(g);
    let limits = config.limits;
    let alphabet = g.terminals().clone();
    let cert = cfg_bounded(&g, limits)?;
    let around = |middle: &Nfa| -> Result<Cfg> {
        let pattern = Nfa::universal(alphabet.clone()).concat(middle)?.concat(&Nfa::universal(alphabet.clone()))?;
        cfg_intersect_regular(&g, &determinize_trim(&pattern, limits)?, limits)
    };
    if let Some((location, u, v)) = cert.witness.clone() {
        let word = |w: &Word| Nfa::word(alphabet.clone(), w);
        let middle = word(&u).concat(&word(&v))?.concat(&word(&v).star())?.concat(&word(&u))?;
        let focused = around(&middle)?;
        let antichain = mine_grammars(&[&focused, &g], config);
        return Ok(DecisionReport {
            relation: OrderRelation::Infix,
            verdict: Verdict::NotWqo,
            certificate: Certificate::Unboundedness { location, u, v, antichain },
            ordinal_bounds: None,
        });
    }
    let n0 = determinize_trim(&cfg_subword_closure(&g, limits)?, limits)?.num_states();
    let (n, m) = (cert.n(), cert.m());
    let bounds = RBounds { n, m, n0, b1: n.max(m), b2: n * m * (n0 + 1) };
    let periods = r_periods(&bounds, &alphabet, config.max_periods)?;
    let r = crate::decision::build_r_language(&bounds, &alphabet, config.max_periods)?;
    // L lies in the bounded cover C, so only C \ R matters, and that is far
    // smaller than the complement of R.
    let cover = bounded_cover(&cert.words, &alphabet)?;
    let outside = difference_dfa(&cover, &r, limits)?;
    match cfg_is_empty(&cfg_intersect_regular(&g, &outside, limits)?) {
        (true, _) => Ok(DecisionReport {
            relation: OrderRelation::Infix,
            verdict: Verdict::Wqo,
            certificate: Certificate::RInclusion { bounds, words: cert.words, periods },
            ordinal_bounds: Some(OrdinalBounds {
                height: Bound::at_most(OrdinalExpr::omega()),
                width: Bound::below(OrdinalExpr::omega_pow(2)?),
                mot: Bound::below(OrdinalExpr::omega_pow(3)?),
            }),
        }),
        (false, word) => {
            let word = word.expect("a non-empty language has a least word");
            let focused = around(&Nfa::word(alphabet.clone(), &word))?;
            let antichain = mine_grammars(&[&focused, &g], config);
            Ok(DecisionReport {
                relation: OrderRelation::Infix,
                verdict: Verdict::NotWqo,
                certificate: Certificate::EscapeWord { word, bounds, antichain },
                ordinal_bounds: None,
            })
        }
    }
}

/// Mines infix antichains from grammar enumerations of growing length:
/// greedy passes over each grammar (the focused one first), then the full
/// miner.
fn mine_grammars(grammars: &[&Cfg], config: &DecisionConfig) -> Vec<Word> {
    const LENGTHS: [usize; 6] = [4, 8, 12, 16, 24, 32];
    let limits = Limits { max_output: config.mining_budget, ..config.limits };
    let (target, budget) = (config.antichain_size, config.mining_budget);
    let mut best = Vec::new();
    for g in grammars {
        for maxlen in LENGTHS {
            let Ok(words) = cfg_enumerate(g, maxlen, limits) else { break };
            let out = greedy_antichain(words, OrderRelation::Infix, target, budget);
            if out.complete {
                return out.words;
            }
            if out.words.len() > best.len() {
                best = out.words;
            }
        }
    }
    for g in grammars {
        for maxlen in LENGTHS {
            let Ok(words) = cfg_enumerate(g, maxlen, limits) else { break };
            let out = mine(words, OrderRelation::Infix, target, budget);
            if out.complete {
                return out.words;
            }
            if out.words.len() > best.len() {
                best = out.words;
            }
        }
    }
    best
}
