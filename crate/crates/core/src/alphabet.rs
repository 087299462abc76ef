//! Alphabets and finite words.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A finite, non-empty set of single-character symbols, kept sorted so that
/// iteration order (and therefore every length-lexicographic choice made by
/// the algorithms) is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting duplicates and the empty set.
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in symbols {
            if !seen.insert(s) {
                return Err(Error::DuplicateSymbol(s));
            }
        }
        if seen.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { symbols: seen.into_iter().collect() })
    }

    /// Like [`Alphabet::new`] but silently merges duplicates.
    pub fn from_chars<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let set: BTreeSet<char> = symbols.into_iter().collect();
        Self::new(set)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.symbols.iter().copied()
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.binary_search(&c).is_ok()
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.binary_search(&c).ok()
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    /// The union of two alphabets.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::from_chars(self.iter().chain(other.iter())).expect("union of non-empty alphabets")
    }

    /// This alphabet extended by one fresh symbol.
    pub fn with_symbol(&self, c: char) -> Result<Alphabet> {
        if self.contains(c) {
            return Err(Error::MarkerPresent(c));
        }
        Alphabet::new(self.iter().chain(core::iter::once(c)))
    }

    /// Checks that every symbol of `w` belongs to the alphabet.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.iter().find(|c| !self.contains(*c)) {
            Some(c) => Err(Error::UnknownSymbol(c)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite word. Words are ordered length-lexicographically, which is the
/// order used for every "shortest" witness in the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_chars(chars: Vec<char>) -> Self {
        Word(chars)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[char] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = char> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, c: char) {
        self.0.push(c);
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn into_chars(self) -> Vec<char> {
        self.0
    }

    /// Renders the word, using `ε` for the empty word.
    pub fn display_eps(&self) -> String {
        if self.0.is_empty() {
            String::from("ε")
        } else {
            self.0.iter().collect()
        }
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl From<Vec<char>> for Word {
    fn from(v: Vec<char>) -> Self {
        Word(v)
    }
}

impl FromIterator<char> for Word {
    fn from_iter<I: IntoIterator<Item = char>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
