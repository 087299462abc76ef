//! Infinite words: Thue-Morse, automatic sequences, recurrence profiles and
//! an empirical test for ultimate uniform recurrence.
//!
//! A one-sided infinite word has a well-quasi-ordered set of infixes exactly
//! when some suffix of it is uniformly recurrent. Only finite prefixes can be
//! scanned, so everything here is evidence: a consistent verdict means the
//! scanned windows stabilised, and a refutation carries an explicit antichain
//! of factors.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Word;
use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::order::{is_antichain, OrderRelation};

pub const DEFAULT_HORIZON: usize = 1 << 16;
pub const DEFAULT_K_MAX: usize = 8;
pub const DEFAULT_N0_CAP: usize = 64;
/// Return words needed before a factor counts as non-recurrent evidence.
pub const REFUTATION_SIZE: usize = 8;

/// `w ∈ Σ^ℕ`, given letter by letter.
pub trait Sequence {
    fn letter(&self, i: usize) -> char;
    fn describe(&self) -> String;

    fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter(i)).collect()
    }
}

/// `w ∈ Σ^ℤ`.
pub trait BiSequence {
    fn letter(&self, i: i64) -> char;
    fn describe(&self) -> String;
}

/// Parity of the number of ones in the binary expansion of `i`.
pub fn thue_morse(i: u64) -> char {
    if i.count_ones().is_multiple_of(2) {
        '0'
    } else {
        '1'
    }
}

pub fn thue_morse_prefix(n: usize) -> Word {
    ThueMorse.prefix(n)
}

/// `a b a a b a a a b …`
pub fn block_word_prefix(n: usize) -> Word {
    let mut out = Vec::with_capacity(n);
    let mut block = 1;
    while out.len() < n {
        out.extend(core::iter::repeat_n('a', block));
        out.push('b');
        block += 1;
    }
    out.truncate(n);
    Word::from(out)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ThueMorse;

impl Sequence for ThueMorse {
    fn letter(&self, i: usize) -> char {
        thue_morse(i as u64)
    }

    fn describe(&self) -> String {
        "thue-morse".into()
    }
}

/// `a¹b a²b a³b …`, not uniformly recurrent: the gaps between `b`s grow.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockWord;

impl Sequence for BlockWord {
    fn letter(&self, i: usize) -> char {
        // Block j (from 1) ends at position j(j+3)/2 - 1.
        let mut j = 1usize;
        while j * (j + 3) / 2 <= i {
            j += 1;
        }
        if i == j * (j + 3) / 2 - 1 {
            'b'
        } else {
            'a'
        }
    }

    fn describe(&self) -> String {
        "block-word".into()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Constant(pub char);

impl Sequence for Constant {
    fn letter(&self, _: usize) -> char {
        self.0
    }

    fn describe(&self) -> String {
        format!("constant {}", self.0)
    }
}

/// A finite word followed by an infinite one.
pub struct Prefixed {
    pub prefix: Word,
    pub rest: Box<dyn Sequence>,
}

impl Sequence for Prefixed {
    fn letter(&self, i: usize) -> char {
        match self.prefix.as_slice().get(i) {
            Some(&c) => c,
            None => self.rest.letter(i - self.prefix.len()),
        }
    }

    fn describe(&self) -> String {
        format!("{} then {}", self.prefix, self.rest.describe())
    }
}

/// `w_{≥offset}`.
pub struct Shifted<'a> {
    pub inner: &'a dyn Sequence,
    pub offset: usize,
}

impl Sequence for Shifted<'_> {
    fn letter(&self, i: usize) -> char {
        self.inner.letter(i + self.offset)
    }

    fn describe(&self) -> String {
        format!("{} from {}", self.inner.describe(), self.offset)
    }
}

/// `w(i)` is `right(i)` for `i ≥ 0` and `left(-i)` otherwise.
pub struct Glued {
    pub left: Box<dyn Sequence>,
    pub right: Box<dyn Sequence>,
}

impl BiSequence for Glued {
    fn letter(&self, i: i64) -> char {
        if i >= 0 {
            self.right.letter(i as usize)
        } else {
            self.left.letter(i.unsigned_abs() as usize)
        }
    }

    fn describe(&self) -> String {
        format!("{} | {}", self.left.describe(), self.right.describe())
    }
}

/// `w₊(i) = w(i)`.
pub struct PositiveSide<'a>(pub &'a dyn BiSequence);

/// `w₋(i) = w(-i)`; shares position 0 with [`PositiveSide`].
pub struct NegativeSide<'a>(pub &'a dyn BiSequence);

impl Sequence for PositiveSide<'_> {
    fn letter(&self, i: usize) -> char {
        self.0.letter(i as i64)
    }

    fn describe(&self) -> String {
        format!("positive side of {}", self.0.describe())
    }
}

impl Sequence for NegativeSide<'_> {
    fn letter(&self, i: usize) -> char {
        self.0.letter(-(i as i64))
    }

    fn describe(&self) -> String {
        format!("negative side of {}", self.0.describe())
    }
}

/// A sequence whose `i`-th letter is the output of a complete DFA reading
/// `i` in base `b`, most significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticSequence {
    base: u32,
    dfa: Dfa,
    outputs: Vec<char>,
}

impl AutomaticSequence {
    /// The digit alphabet must be `0..b`; the DFA must be complete with an
    /// output on every reachable state, and leading zeros must not change
    /// the output.
    pub fn new(base: u32, dfa: Dfa, outputs: Vec<Option<char>>) -> Result<Self> {
        if !(2..=10).contains(&base) {
            return Err(Error::Malformed(format!("base {base} is outside 2..=10")));
        }
        let digits: Vec<char> = (0..base).map(|d| char::from_digit(d, 10).unwrap()).collect();
        if dfa.alphabet().symbols() != digits.as_slice() {
            return Err(Error::Malformed("the alphabet must be the digits of the base".into()));
        }
        if outputs.len() != dfa.num_states() {
            return Err(Error::Malformed("one output slot per state is required".into()));
        }
        let q0 = dfa.initial().ok_or_else(|| Error::Malformed("no initial state".into()))?;
        let mut seen = alloc::vec![false; dfa.num_states()];
        let mut queue = VecDeque::from([q0]);
        seen[q0] = true;
        while let Some(s) = queue.pop_front() {
            if outputs[s].is_none() {
                return Err(Error::Malformed(format!("state q{s} has no output")));
            }
            for &d in &digits {
                let t = dfa.step(s, d).ok_or_else(|| Error::Malformed(format!("q{s} has no move on {d}")))?;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let outputs: Vec<char> = outputs.into_iter().map(|o| o.unwrap_or('?')).collect();
        let seq = AutomaticSequence { base, dfa, outputs };
        let after_zero = seq.dfa.step(q0, '0').unwrap();
        if let Some(d) = seq.distinguishing_digits(q0, after_zero) {
            return Err(Error::Malformed(format!("a leading zero changes the output on digits '{d}'")));
        }
        Ok(seq)
    }

    /// The classic two-state base-2 automaton for Thue-Morse.
    pub fn thue_morse() -> Self {
        let digits = crate::alphabet::Alphabet::new(['0', '1']).unwrap();
        let mut dfa = Dfa::with_states(digits, 2);
        dfa.set_initial(0);
        for s in 0..2 {
            dfa.set_accepting(s, true);
            dfa.set_transition(s, '0', s).unwrap();
            dfa.set_transition(s, '1', 1 - s).unwrap();
        }
        AutomaticSequence::new(2, dfa, alloc::vec![Some('0'), Some('1')]).unwrap()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn output(&self, s: StateId) -> char {
        self.outputs[s]
    }

    /// Output after reading a digit string.
    pub fn eval_digits(&self, digits: &str) -> Result<char> {
        let mut s = self.dfa.initial().unwrap();
        for d in digits.chars() {
            s = self.dfa.step(s, d).ok_or(Error::UnknownSymbol(d))?;
        }
        Ok(self.outputs[s])
    }

    pub fn eval(&self, i: u64) -> char {
        let mut digits = Vec::new();
        let mut n = i;
        loop {
            digits.push(char::from_digit((n % self.base as u64) as u32, 10).unwrap());
            n /= self.base as u64;
            if n == 0 {
                break;
            }
        }
        let mut s = self.dfa.initial().unwrap();
        for &d in digits.iter().rev() {
            s = self.dfa.step(s, d).unwrap();
        }
        self.outputs[s]
    }

    /// A digit string on which the two states produce different outputs.
    fn distinguishing_digits(&self, p: StateId, q: StateId) -> Option<String> {
        let mut seen = BTreeSet::from([(p, q)]);
        let mut queue = VecDeque::from([(p, q, String::new())]);
        while let Some((a, b, w)) = queue.pop_front() {
            if self.outputs[a] != self.outputs[b] {
                return Some(w);
            }
            for d in self.dfa.alphabet().iter() {
                let pair = (self.dfa.step(a, d).unwrap(), self.dfa.step(b, d).unwrap());
                if seen.insert(pair) {
                    let mut w2 = w.clone();
                    w2.push(d);
                    queue.push_back((pair.0, pair.1, w2));
                }
            }
        }
        None
    }
}

impl Sequence for AutomaticSequence {
    fn letter(&self, i: usize) -> char {
        self.eval(i as u64)
    }

    fn describe(&self) -> String {
        format!("automatic sequence in base {}", self.base)
    }
}

/// An occurrence of a cube `uuu`: its position and `u`, smallest `|u|` first.
pub fn has_cube(w: &Word) -> Option<(usize, Word)> {
    let s = w.as_slice();
    for p in 1..=s.len() / 3 {
        let mut run = 0;
        for i in 0..s.len() - p {
            if s[i] == s[i + p] {
                run += 1;
                if run == 2 * p {
                    let start = i + 1 - 2 * p;
                    return Some((start, Word::from(s[start..start + p].to_vec())));
                }
            } else {
                run = 0;
            }
        }
    }
    None
}

/// Recurrence data of the length-`k` factors of a scanned prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceLevel {
    pub k: usize,
    pub factors: usize,
    /// Most positions strictly between consecutive occurrences of a factor,
    /// counting the scan boundaries as occurrences.
    pub max_gap: usize,
    /// `max_gap + k`: every window this long contains every factor. `None`
    /// when the bound was still growing over the second half of the scan.
    pub window: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceProfile {
    pub k_max: usize,
    pub horizon: usize,
    pub levels: Vec<RecurrenceLevel>,
}

impl RecurrenceProfile {
    pub fn all_bounded(&self) -> bool {
        self.levels.iter().all(|l| l.window.is_some())
    }

    pub fn level(&self, k: usize) -> Option<&RecurrenceLevel> {
        self.levels.get(k.checked_sub(1)?)
    }
}

/// Factor count and largest gap of the length-`k` factors of `w`.
fn gap_scan(w: &[char], k: usize) -> (usize, usize) {
    if w.len() < k {
        return (0, 0);
    }
    let mut last: BTreeMap<&[char], (usize, usize)> = BTreeMap::new();
    for i in 0..=w.len() - k {
        let entry = last.entry(&w[i..i + k]).or_insert((usize::MAX, i));
        if entry.0 != usize::MAX {
            entry.1 = entry.1.max(i - entry.0 - 1);
        }
        entry.0 = i;
    }
    let end = w.len() - k + 1;
    let gap = last.values().map(|&(pos, g)| g.max(end - pos - 1)).max().unwrap_or(0);
    (last.len(), gap)
}

fn level_of(w: &[char], k: usize) -> RecurrenceLevel {
    let (factors, max_gap) = gap_scan(w, k);
    let (_, half_gap) = gap_scan(&w[..w.len() / 2], k);
    let window = (half_gap == max_gap).then_some(max_gap + k);
    RecurrenceLevel { k, factors, max_gap, window }
}

fn profile_of(w: &[char], k_max: usize, stop_early: bool) -> RecurrenceProfile {
    let mut levels = Vec::new();
    for k in 1..=k_max {
        let level = level_of(w, k);
        let unbounded = level.window.is_none();
        levels.push(level);
        if unbounded && stop_early {
            break;
        }
    }
    RecurrenceProfile { k_max, horizon: w.len(), levels }
}

pub fn recurrence_profile(s: &dyn Sequence, k_max: usize, horizon: usize) -> Result<RecurrenceProfile> {
    if k_max > horizon {
        return Err(Error::Precondition("k_max exceeds the horizon".into()));
    }
    Ok(profile_of(s.prefix(horizon).as_slice(), k_max, false))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UrVerdict {
    /// The suffix from `n0` had stable windows for every `k ≤ k_max`.
    Consistent { n0: usize, profile: RecurrenceProfile },
    /// Pairwise infix-incomparable factors: the return words of one factor.
    Refuted { factor: Word, antichain: Vec<Word> },
    Inconclusive,
}

impl UrVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            UrVerdict::Consistent { .. } => "ur-consistent",
            UrVerdict::Refuted { .. } => "refuted",
            UrVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Looks for a shift `n0 ≤ n0_cap` after which the word looks uniformly
/// recurrent, and failing that for a factor with at least
/// [`REFUTATION_SIZE`] distinct complete return words.
///
/// Distinct complete return words of one factor `u` (words starting and
/// ending with `u` with no other occurrence of `u`) are pairwise
/// infix-incomparable, and a uniformly recurrent word has finitely many.
pub fn empirical_ultimately_ur(s: &dyn Sequence, n0_cap: usize, k_max: usize, horizon: usize) -> UrVerdict {
    let scan = s.prefix(n0_cap + horizon);
    let w = scan.as_slice();
    for n0 in 0..=n0_cap {
        let window = &w[n0..n0 + horizon];
        if profile_of(window, k_max, true).all_bounded() {
            return UrVerdict::Consistent { n0, profile: profile_of(window, k_max, false) };
        }
    }
    let mut seen: BTreeSet<&[char]> = BTreeSet::new();
    let mut factors: Vec<Word> = Vec::new();
    for k in 1..=k_max.min(w.len()) {
        for i in 0..=w.len() - k {
            if seen.insert(&w[i..i + k]) {
                factors.push(Word::from(w[i..i + k].to_vec()));
            }
        }
    }
    factors.sort();
    for u in factors {
        let returns = return_words(w, u.as_slice());
        if returns.len() >= REFUTATION_SIZE {
            let antichain: Vec<Word> = returns.into_iter().take(REFUTATION_SIZE).collect();
            debug_assert!(is_antichain(OrderRelation::Infix, &antichain));
            if is_antichain(OrderRelation::Infix, &antichain) {
                return UrVerdict::Refuted { factor: u, antichain };
            }
        }
    }
    UrVerdict::Inconclusive
}

/// Distinct complete return words of `u` in `w`, in length-lex order.
pub fn return_words(w: &[char], u: &[char]) -> Vec<Word> {
    let k = u.len();
    if k == 0 || w.len() < k {
        return Vec::new();
    }
    let occ: Vec<usize> = (0..=w.len() - k).filter(|&i| &w[i..i + k] == u).collect();
    let set: BTreeSet<Word> = occ.windows(2).map(|p| Word::from(w[p[0]..p[1] + k].to_vec())).collect();
    set.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiVerdict {
    pub positive: UrVerdict,
    pub negative: UrVerdict,
}

impl BiVerdict {
    /// A bi-infinite word has wqo infixes iff both sides do.
    pub fn combined(&self) -> &'static str {
        match (&self.positive, &self.negative) {
            (UrVerdict::Consistent { .. }, UrVerdict::Consistent { .. }) => "ur-consistent",
            (UrVerdict::Refuted { .. }, _) | (_, UrVerdict::Refuted { .. }) => "refuted",
            _ => "inconclusive",
        }
    }
}

pub fn bi_split_check(s: &dyn BiSequence, n0_cap: usize, k_max: usize, horizon: usize) -> BiVerdict {
    BiVerdict {
        positive: empirical_ultimately_ur(&PositiveSide(s), n0_cap, k_max, horizon),
        negative: empirical_ultimately_ur(&NegativeSide(s), n0_cap, k_max, horizon),
    }
}
