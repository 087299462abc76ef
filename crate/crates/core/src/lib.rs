//! Decision procedures for well-quasi-ordered languages.
//!
//! Given a language as a regular expression, a finite automaton or a
//! context-free grammar, the crate decides whether it is well-quasi-ordered
//! by the prefix, suffix or infix relation and produces certificates that can
//! be checked independently: chain decompositions, bounding words,
//! antichains, escape words and ordinal-invariant bounds.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON reports
//! and the command-line interface live in the companion `wqo` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alphabet;
pub mod automata;
pub mod decision;
pub mod error;
pub mod grammar;
pub mod infinite;
pub mod order;
pub mod ordinal;
pub mod regex;
pub mod words;

pub use alphabet::{Alphabet, Word};
pub use automata::{Dfa, Label, Limits, Nfa, StateId, Transducer};
pub use decision::{Certificate, DecisionConfig, DecisionReport, OrdinalBounds, Verdict};

pub use error::{Error, Result};
pub use grammar::Cfg;
pub use order::{compare, Comparison, OrderRelation};
pub use ordinal::OrdinalExpr;
pub use regex::Regex;
