//! Deciding whether a language is well-quasi-ordered by the prefix, suffix
//! or infix relation, with checkable certificates.

use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Word;
use crate::automata::{determinize_trim, Dfa, Limits, Nfa};
use crate::error::Result;
use crate::order::OrderRelation;
use crate::ordinal::OrdinalExpr;

mod bounded;
mod infix;
mod prefix;

pub use bounded::{bounded_cover, decide_bounded, BoundednessCertificate};
pub use infix::{
    build_r_language, compute_r_bounds, decide_infix, decide_infix_closure_invariance, ideal_representation,
    r_periods, reduction_emptiness_to_prefix, reduction_prefix_to_infix, IdealTriple, RBounds,
};
pub use prefix::{antichain_branch_witness, decide_prefix, decide_suffix, fork_analysis, PrefixAnalysis};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Wqo,
    NotWqo,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Wqo => "wqo",
            Verdict::NotWqo => "not-wqo",
        }
    }

    pub fn is_wqo(self) -> bool {
        self == Verdict::Wqo
    }
}

/// An upper bound on an ordinal invariant, `< value` when `strict`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: OrdinalExpr,
    pub strict: bool,
}

impl Bound {
    pub fn at_most(value: OrdinalExpr) -> Self {
        Bound { value, strict: false }
    }

    pub fn below(value: OrdinalExpr) -> Self {
        Bound { value, strict: true }
    }

    /// Whether this bound implies `< limit`.
    pub fn implies_below(&self, limit: &OrdinalExpr) -> bool {
        if self.strict {
            self.value <= *limit
        } else {
            self.value < *limit
        }
    }

    /// Whether this bound implies `≤ limit`.
    pub fn implies_at_most(&self, limit: &OrdinalExpr) -> bool {
        self.value <= *limit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrdinalBounds {
    pub height: Bound,
    pub width: Bound,
    pub mot: Bound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `L` is covered by `chain_count` prefix chains: one per anchor (the
    /// words of `L` extending it) plus the finitely many `branching` words
    /// of `L` that have two incomparable extensions in `L`.
    ChainDecomposition { anchors: Vec<Word>, branching: Vec<Word>, chain_count: usize },
    /// `L ⊆ R`, a finite union of products of chains.
    RInclusion { bounds: RBounds, words: Vec<Word>, periods: Vec<Word> },
    AntichainSample { words: Vec<Word> },
    /// Two non-commuting cycles at `location` make `L` unbounded.
    Unboundedness { location: String, u: Word, v: Word, antichain: Vec<Word> },
    /// A word of `L` outside `R`.
    EscapeWord { word: Word, bounds: RBounds, antichain: Vec<Word> },
    /// Every language is well-quasi-ordered by the subword relation.
    Higman,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ChainDecomposition { .. } => "chain-decomposition",
            Certificate::RInclusion { .. } => "r-inclusion",
            Certificate::AntichainSample { .. } => "antichain-sample",
            Certificate::Unboundedness { .. } => "unboundedness",
            Certificate::EscapeWord { .. } => "escape-word",
            Certificate::Higman => "higman",
        }
    }

    /// The antichain carried by a negative certificate.
    pub fn antichain(&self) -> Option<&[Word]> {
        match self {
            Certificate::AntichainSample { words } => Some(words),
            Certificate::Unboundedness { antichain, .. } | Certificate::EscapeWord { antichain, .. } => {
                Some(antichain)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport {
    pub relation: OrderRelation,
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Present on wqo verdicts only.
    pub ordinal_bounds: Option<OrdinalBounds>,
}

/// Tunables shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecisionConfig {
    pub limits: Limits,
    /// Size of the antichain attached to negative verdicts.
    pub antichain_size: usize,
    /// Words examined when mining antichains.
    pub mining_budget: usize,
    /// Cap on the number of periods in the union building `R`.
    pub max_periods: usize,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig { limits: Limits::default(), antichain_size: 5, mining_budget: 100_000, max_periods: 20_000 }
    }
}

/// Determinizes and dispatches on the relation.
pub fn decide(rel: OrderRelation, nfa: &Nfa, config: &DecisionConfig) -> Result<DecisionReport> {
    if rel == OrderRelation::Subword {
        return Ok(decide_subword());
    }
    let dfa = determinize_trim(nfa, config.limits)?;
    decide_dfa(rel, &dfa, config)
}

pub fn decide_dfa(rel: OrderRelation, dfa: &Dfa, config: &DecisionConfig) -> Result<DecisionReport> {
    match rel {
        OrderRelation::Prefix => decide_prefix(dfa, config),
        OrderRelation::Suffix => decide_suffix(dfa, config),
        OrderRelation::Infix => decide_infix(dfa, config),
        OrderRelation::Subword => Ok(decide_subword()),
    }
}

/// Higman's lemma: the answer does not depend on the language.
pub fn decide_subword() -> DecisionReport {
    DecisionReport {
        relation: OrderRelation::Subword,
        verdict: Verdict::Wqo,
        certificate: Certificate::Higman,
        ordinal_bounds: None,
    }
}

pub(crate) fn trim_of(dfa: &Dfa) -> Dfa {
    if dfa.is_trim() {
        dfa.clone()
    } else {
        dfa.trimmed()
    }
}
