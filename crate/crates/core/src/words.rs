//! Periods of finite words and the languages `Inf(x)` of infixes of powers.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{determinize_trim, Dfa, Label, Limits, Nfa};
use crate::error::{Error, Result};

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `table[i]` is the length of the longest proper border of `w[..=i]`.
pub fn border_table(w: &[char]) -> Vec<usize> {
    let mut table = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = table[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        table[i] = k;
    }
    table
}

/// The least `p ≥ 1` with `w[i] = w[i + p]` wherever both sides exist.
pub fn minimal_period(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let table = border_table(w.as_slice());
    Ok(w.len() - table[w.len() - 1])
}

pub fn is_prefix(u: &Word, v: &Word) -> bool {
    v.as_slice().starts_with(u.as_slice())
}

pub fn is_suffix(u: &Word, v: &Word) -> bool {
    v.as_slice().ends_with(u.as_slice())
}

pub fn is_infix(u: &Word, v: &Word) -> bool {
    u.is_empty() || v.as_slice().windows(u.len()).any(|win| win == u.as_slice())
}

/// The shortest `z` with `w = z^k`.
pub fn primitive_root(w: &Word) -> Word {
    if w.is_empty() {
        return Word::empty();
    }
    let p = minimal_period(w).unwrap();
    if w.len().is_multiple_of(p) {
        w.slice(0, p)
    } else {
        w.clone()
    }
}

/// The lexicographically least cyclic rotation.
pub fn least_rotation(w: &Word) -> Word {
    (0..w.len().max(1)).map(|k| w.rotate(k)).min_by(|a, b| a.as_slice().cmp(b.as_slice())).unwrap_or_default()
}

/// Primitive root in least rotation. `Inf(x)` only depends on this word.
pub fn canonical_period(x: &Word) -> Result<Word> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(least_rotation(&primitive_root(x)))
}

pub fn are_conjugate(u: &Word, v: &Word) -> bool {
    u.len() == v.len() && (u.is_empty() || is_infix(u, &v.pow(2)))
}

/// Lyndon words (primitive words that are least among their rotations) of
/// length `1..=max_len`, in length-lexicographic order.
pub fn lyndon_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let syms = alphabet.symbols();
    let k = syms.len();
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    // Duval's generation in lexicographic order over index sequences.
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.iter().map(|&i| syms[i]).collect::<Word>());
        let n = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - n]);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out.sort();
    out
}

/// The cyclic automaton of `Inf(x)`: one state per position of `x`, all of
/// them initial and accepting.
pub fn inf_nfa(x: &Word, alphabet: &Alphabet) -> Result<Nfa> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    alphabet.check_word(x)?;
    let mut n = Nfa::new(alphabet.clone());
    for i in 0..x.len() {
        n.add_state();
        n.set_initial(i);
        n.set_accepting(i);
    }
    for (i, c) in x.iter().enumerate() {
        n.add_transition(i, Label::Sym(c), (i + 1) % x.len());
    }
    Ok(n)
}

/// `Inf(x)` with its chain decomposition.
///
/// Every word of `Inf(x)` is either of the form `u x^k v` with `u` a proper
/// suffix and `v` a proper prefix of `x` (one chain per pair, under all three
/// relations), or one of the finitely many `short_factors`, which sit
/// strictly inside a single copy of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodChain {
    /// The canonical period: primitive root of the input in least rotation.
    pub period: Word,
    pub automaton: Dfa,
    pub components: Vec<(Word, Word)>,
    pub short_factors: Vec<Word>,
}

impl PeriodChain {
    /// Index of a component containing `w`, if any.
    pub fn component_of(&self, w: &Word) -> Option<usize> {
        let p = self.period.len();
        self.components.iter().position(|(u, v)| {
            let core = u.len() + v.len();
            w.len() >= core
                && (w.len() - core).is_multiple_of(p)
                && is_prefix(u, w)
                && is_suffix(v, w)
                && *w == u.concat(&self.period.pow((w.len() - core) / p)).concat(v)
        })
    }

    /// Whether `w` is covered by the components or the short factors.
    pub fn covers(&self, w: &Word) -> bool {
        self.component_of(w).is_some() || self.short_factors.binary_search(w).is_ok()
    }
}

pub fn inf_period_chain(x: &Word) -> Result<PeriodChain> {
    let alphabet = Alphabet::from_chars(x.iter()).map_err(|_| Error::EmptyWord)?;
    inf_period_chain_over(x, &alphabet)
}

pub fn inf_period_chain_over(x: &Word, alphabet: &Alphabet) -> Result<PeriodChain> {
    let period = canonical_period(x)?;
    let automaton = determinize_trim(&inf_nfa(&period, alphabet)?, Limits::default())?;
    let p = period.len();
    let mut components = Vec::new();
    for i in 0..p {
        for j in 0..p {
            components.push((period.slice(p - i, p), period.slice(0, j)));
        }
    }
    let mut chain = PeriodChain { period: period.clone(), automaton, components, short_factors: Vec::new() };
    let doubled = period.pow(2);
    let mut short = BTreeSet::new();
    for len in 0..p {
        for start in 0..p {
            let w = doubled.slice(start, start + len);
            if chain.component_of(&w).is_none() {
                short.insert(w);
            }
        }
    }
    chain.short_factors = short.into_iter().collect();
    Ok(chain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inheritance {
    Confirmed,
    ThresholdNotMet,
    Violation,
}

/// For `u` an infix of `v`: if `|u| ≥ p + q − gcd(p, q)` where `p`, `q` are
/// the minimal periods, the two periods must agree.
pub fn period_inheritance_check(u: &Word, v: &Word) -> Result<Inheritance> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !is_infix(u, v) {
        return Err(Error::NotAnInfix { small: u.display_eps(), large: v.display_eps() });
    }
    let p = minimal_period(u)?;
    let q = minimal_period(v)?;
    if u.len() < p + q - gcd(p, q) {
        return Ok(Inheritance::ThresholdNotMet);
    }
    Ok(if p == q { Inheritance::Confirmed } else { Inheritance::Violation })
}

/// Given `u^k ⊑ v^l` (infix), finds `w` with `|w| ≤ min(|u|, |v|)` and an
/// exponent `p` such that `v^l ⊑ w^p`.
///
/// Such a `w` exists whenever the primitive roots of `u` and `v` are
/// conjugate, which is forced once `k|u|` and `l|v|` both reach
/// `|u| + |v|`. Returns `None` when the roots differ.
pub fn common_power_root(u: &Word, k: usize, v: &Word, l: usize) -> Result<Option<(Word, usize)>> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (uk, vl) = (u.pow(k), v.pow(l));
    if !is_infix(&uk, &vl) {
        return Err(Error::NotAnInfix { small: uk.display_eps(), large: vl.display_eps() });
    }
    if are_conjugate(u, v) {
        return Ok(Some((v.clone(), l)));
    }
    let (ru, rv) = (primitive_root(u), primitive_root(v));
    if !are_conjugate(&ru, &rv) {
        debug_assert!(k * u.len() < u.len() + v.len() || l * v.len() < u.len() + v.len());
        return Ok(None);
    }
    let p = l * (v.len() / rv.len());
    debug_assert!(is_infix(&vl, &rv.pow(p)));
    Ok(Some((rv, p)))
}
