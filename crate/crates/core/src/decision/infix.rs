//! The infix relation: boundedness, the bounded-period language `R`, and the
//! reductions showing the infix problem is at least as hard as emptiness.

use alloc::format;
use alloc::vec::Vec;

use super::bounded::{decide_bounded, BoundednessCertificate};
use super::{trim_of, Bound, Certificate, DecisionConfig, DecisionReport, OrdinalBounds, Verdict};
use crate::alphabet::{Alphabet, Word};
use crate::automata::{
    closure, determinize_trim, enumerate, is_subset, apply_transducer, ClosureKind, Dfa, Limits, Nfa, Transducer,
    WordStream,
};
use crate::error::{Error, Result};
use crate::order::{greedy_antichain, mine, MineOutcome, OrderRelation};
use crate::ordinal::OrdinalExpr;
use crate::words::{inf_nfa, lyndon_words};

/// Largest level of live prefixes kept while streaming a language for mining.
const MINING_FRONTIER: usize = 1 << 16;

/// Size parameters of `R = I'·Σ^{≤b2}·I'`, where `I'` is `{ε}` together with
/// `Inf(x)` for every Lyndon word `x` of length at most `b1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RBounds {
    /// Number of bounding words.
    pub n: usize,
    /// Length of the longest bounding word.
    pub m: usize,
    /// States of the minimal trim DFA of the subword closure.
    pub n0: usize,
    pub b1: usize,
    pub b2: usize,
}

/// `b1 = max(n, m)` and `b2 = n·m·(n0 + 1)`.
pub fn compute_r_bounds(cert: &BoundednessCertificate, dfa: &Dfa, limits: Limits) -> Result<RBounds> {
    if !cert.bounded {
        return Err(Error::Precondition("R is only defined for bounded languages".into()));
    }
    let (n, m) = (cert.n(), cert.m());
    let down = closure(ClosureKind::Subword, &trim_of(dfa).to_nfa());
    let n0 = determinize_trim(&down, limits)?.num_states();
    Ok(RBounds { n, m, n0, b1: n.max(m), b2: n * m * (n0 + 1) })
}

/// The periods used in `R`: Lyndon words of length at most `b1`.
pub fn r_periods(bounds: &RBounds, alphabet: &Alphabet, max_periods: usize) -> Result<Vec<Word>> {
    let periods = lyndon_words(alphabet, bounds.b1);
    if periods.len() > max_periods {
        return Err(Error::CapExceeded { cap: max_periods });
    }
    Ok(periods)
}

/// `{ε} ∪ ⋃ Inf(x)` over the given periods.
fn inf_union(periods: &[Word], alphabet: &Alphabet) -> Result<Nfa> {
    let mut out = Nfa::epsilon(alphabet.clone());
    for x in periods {
        out = out.union(&inf_nfa(x, alphabet)?)?;
    }
    Ok(out)
}

pub fn build_r_language(bounds: &RBounds, alphabet: &Alphabet, max_periods: usize) -> Result<Nfa> {
    let periods = r_periods(bounds, alphabet, max_periods)?;
    let side = inf_union(&periods, alphabet)?;
    side.concat(&Nfa::up_to_length(alphabet.clone(), bounds.b2))?.concat(&side)
}

pub fn decide_infix(dfa: &Dfa, config: &DecisionConfig) -> Result<DecisionReport> {
    let d = trim_of(dfa);
    let lang = d.to_nfa();
    let alphabet = d.alphabet().clone();
    let cert = decide_bounded(&d, config.limits)?;
    if let Some((location, u, v)) = cert.witness.clone() {
        // Words u v^k u sit in L under a common context and tend to be
        // pairwise infix-incomparable; mine them first.
        let v_plus = Nfa::word(alphabet.clone(), &v).concat(&Nfa::word(alphabet.clone(), &v).star())?;
        let pattern = Nfa::universal(alphabet.clone())
            .concat(&Nfa::word(alphabet.clone(), &u))?
            .concat(&v_plus)?
            .concat(&Nfa::word(alphabet.clone(), &u))?
            .concat(&Nfa::universal(alphabet.clone()))?;
        let focused = lang.intersection(&pattern)?;
        let antichain = mine_with_fallback(&[&focused, &lang], config);
        return Ok(DecisionReport {
            relation: OrderRelation::Infix,
            verdict: Verdict::NotWqo,
            certificate: Certificate::Unboundedness { location, u, v, antichain },
            ordinal_bounds: None,
        });
    }
    let bounds = compute_r_bounds(&cert, &d, config.limits)?;
    let periods = r_periods(&bounds, &alphabet, config.max_periods)?;
    let side = inf_union(&periods, &alphabet)?;
    let r = side.concat(&Nfa::up_to_length(alphabet.clone(), bounds.b2))?.concat(&side)?;
    match is_subset(&lang, &r, config.limits)? {
        None => {
            let w = OrdinalExpr::omega();
            Ok(DecisionReport {
                relation: OrderRelation::Infix,
                verdict: Verdict::Wqo,
                certificate: Certificate::RInclusion { bounds, words: cert.words, periods },
                ordinal_bounds: Some(OrdinalBounds {
                    height: Bound::at_most(w),
                    width: Bound::below(OrdinalExpr::omega_pow(2)?),
                    mot: Bound::below(OrdinalExpr::omega_pow(3)?),
                }),
            })
        }
        Some(word) => {
            let around = Nfa::universal(alphabet.clone())
                .concat(&Nfa::word(alphabet.clone(), &word))?
                .concat(&Nfa::universal(alphabet.clone()))?;
            let focused = lang.intersection(&around)?;
            let antichain = mine_with_fallback(&[&focused, &lang], config);
            Ok(DecisionReport {
                relation: OrderRelation::Infix,
                verdict: Verdict::NotWqo,
                certificate: Certificate::EscapeWord { word, bounds, antichain },
                ordinal_bounds: None,
            })
        }
    }
}

/// Greedy passes over each language first, then the full miner on each in
/// turn; keeps the first complete antichain or else the largest partial
/// one. Focused languages can be thin, so the miner gets a fraction of the
/// budget on them and all of it on the last language.
fn mine_with_fallback(langs: &[&Nfa], config: &DecisionConfig) -> Vec<Word> {
    let stream = |n: &Nfa| WordStream::new(n, MINING_FRONTIER);
    let (target, budget) = (config.antichain_size, config.mining_budget);
    let mut best = Vec::new();
    for lang in langs {
        let out = greedy_antichain(stream(lang), OrderRelation::Infix, target, budget / 8);
        if out.complete {
            return out.words;
        }
        if out.words.len() > best.len() {
            best = out.words;
        }
    }
    for (i, lang) in langs.iter().enumerate() {
        let share = if i + 1 == langs.len() { budget } else { budget / 4 };
        let MineOutcome { words, complete, .. } = mine(stream(lang), OrderRelation::Infix, target, share);
        if complete {
            return words;
        }
        if words.len() > best.len() {
            best = words;
        }
    }
    best
}

/// For a bounded `L`, deciding `L` and its infix closure gives the same verdict.
/// Returns both verdicts agreeing, and fails on unbounded input.
pub fn decide_infix_closure_invariance(dfa: &Dfa, config: &DecisionConfig) -> Result<bool> {
    let d = trim_of(dfa);
    if !decide_bounded(&d, config.limits)?.bounded {
        return Err(Error::Precondition("the language is not bounded".into()));
    }
    let closed = determinize_trim(&closure(ClosureKind::Infix, &d.to_nfa()), config.limits)?;
    let a = decide_infix(&d, config)?.verdict;
    let b = decide_infix(&closed, config)?.verdict;
    Ok(a == b)
}

/// The ideal `Inf(x)·u·Inf(y)`; an empty `x` or `y` stands for `{ε}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IdealTriple {
    pub x: Word,
    pub u: Word,
    pub y: Word,
}

impl IdealTriple {
    pub fn to_nfa(&self, alphabet: &Alphabet) -> Result<Nfa> {
        let side = |p: &Word| if p.is_empty() { Ok(Nfa::epsilon(alphabet.clone())) } else { inf_nfa(p, alphabet) };
        side(&self.x)?.concat(&Nfa::word(alphabet.clone(), &self.u))?.concat(&side(&self.y)?)
    }
}

fn union_of(triples: &[IdealTriple], alphabet: &Alphabet) -> Result<Nfa> {
    let mut out = Nfa::empty(alphabet.clone());
    for t in triples {
        out = out.union(&t.to_nfa(alphabet)?)?;
    }
    Ok(out)
}

/// Writes an infix-closed, infix-wqo language as a finite union of ideals
/// `Inf(x)·u·Inf(y)` with `|x|, |y| ≤ b1` and `|u| ≤ b2`.
///
/// Candidates are tried middle word first in length-lex order, then the
/// period shapes x-only, y-only, both, none. A candidate inside `L` and not
/// already covered is kept; redundant ideals are pruned at the end and the
/// union is checked equal to `L`. `budget` caps the candidates examined.
pub fn ideal_representation(dfa: &Dfa, config: &DecisionConfig, budget: usize) -> Result<Vec<IdealTriple>> {
    let d = trim_of(dfa);
    let alphabet = d.alphabet().clone();
    let lang = d.to_nfa();
    let limits = config.limits;
    if let Some(w) = is_subset(&closure(ClosureKind::Infix, &lang), &lang, limits)? {
        return Err(Error::Precondition(format!("not infix-closed: '{}' is missing", w.display_eps())));
    }
    let cert = decide_bounded(&d, limits)?;
    if !cert.bounded {
        return Err(Error::Precondition("the language is not bounded".into()));
    }
    let bounds = compute_r_bounds(&cert, &d, limits)?;
    let mut periods = Vec::new();
    for x in r_periods(&bounds, &alphabet, config.max_periods)? {
        if is_subset(&inf_nfa(&x, &alphabet)?, &lang, limits)?.is_none() {
            periods.push(x);
        }
    }
    let middles = enumerate(&lang, bounds.b2, limits)?;
    let none = Word::empty();

    let mut kept: Vec<IdealTriple> = Vec::new();
    let mut examined = 0usize;
    'outer: for u in &middles {
        let mut shapes: Vec<(Word, Word)> = Vec::new();
        shapes.extend(periods.iter().map(|x| (x.clone(), none.clone())));
        shapes.extend(periods.iter().map(|y| (none.clone(), y.clone())));
        for x in &periods {
            shapes.extend(periods.iter().map(|y| (x.clone(), y.clone())));
        }
        shapes.push((none.clone(), none.clone()));
        for (x, y) in shapes {
            examined += 1;
            if examined > budget {
                return Err(Error::Exhausted { what: "an ideal representation was found", limit: budget });
            }
            let t = IdealTriple { x, u: u.clone(), y };
            let tn = t.to_nfa(&alphabet)?;
            if is_subset(&tn, &lang, limits)?.is_some() || is_subset(&tn, &union_of(&kept, &alphabet)?, limits)?.is_none()
            {
                continue;
            }
            kept.push(t);
            if is_subset(&lang, &union_of(&kept, &alphabet)?, limits)?.is_none() {
                break 'outer;
            }
        }
    }
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let others: Vec<IdealTriple> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t.clone()).collect();
        if is_subset(&kept[i].to_nfa(&alphabet)?, &union_of(&others, &alphabet)?, limits)?.is_none() {
            kept.remove(i);
        }
    }
    let total = union_of(&kept, &alphabet)?;
    if is_subset(&lang, &total, limits)?.is_some() || is_subset(&total, &lang, limits)?.is_some() {
        return Err(Error::Exhausted { what: "the ideals matched the language", limit: budget });
    }
    Ok(kept)
}

/// `L ↦ #L` for a fresh marker `#`: `#u` is an infix of `#v` exactly when `u`
/// is a prefix of `v`, so prefix-wqo of `L` equals infix-wqo of the image.
pub fn reduction_prefix_to_infix(nfa: &Nfa) -> Result<Nfa> {
    apply_transducer(&Transducer::marker(nfa.alphabet(), '#')?, nfa)
}

/// `L ↦ ∅` when `L` is empty and `{a,b}*` otherwise, so `L` is empty exactly
/// when the image is prefix-wqo.
pub fn reduction_emptiness_to_prefix(nfa: &Nfa) -> Result<Nfa> {
    apply_transducer(&Transducer::full_image(nfa.alphabet()), nfa)
}
