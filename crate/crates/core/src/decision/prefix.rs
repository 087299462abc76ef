//! Prefix and suffix decisions on a trim DFA.
//!
//! A word `w` has two prefix-incomparable extensions in `L` exactly when the
//! state it reaches can reach a fork (a state with two live letters). The
//! language is a finite union of prefix chains iff that set of words is
//! finite, i.e. iff no such state lies on a cycle.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{trim_of, Bound, Certificate, DecisionConfig, DecisionReport, OrdinalBounds, Verdict};
use crate::alphabet::Word;
use crate::automata::{determinize_trim, scc, Dfa, StateId};
use crate::error::{Error, Result};
use crate::order::OrderRelation;
use crate::ordinal::OrdinalExpr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixAnalysis {
    pub dfa: Dfa,
    /// States with at least two outgoing letters.
    pub fork_states: BTreeSet<StateId>,
    /// States from which a fork is reachable.
    pub nc_states: BTreeSet<StateId>,
    /// The words reaching `nc_states`.
    pub s_language: Dfa,
}

impl PrefixAnalysis {
    /// NC states lying on a cycle; the language is prefix-wqo iff empty.
    pub fn cyclic_nc_states(&self) -> Vec<StateId> {
        let on_cycle = states_on_cycles(&self.dfa);
        self.nc_states.iter().copied().filter(|&s| on_cycle[s]).collect()
    }
}

pub(crate) fn states_on_cycles(dfa: &Dfa) -> Vec<bool> {
    let adj = dfa.graph();
    let comp = scc(&adj);
    let mut size = vec![0usize; dfa.num_states()];
    for &c in &comp {
        size[c] += 1;
    }
    (0..dfa.num_states()).map(|s| size[comp[s]] > 1 || adj[s].contains(&s)).collect()
}

pub fn fork_analysis(dfa: &Dfa) -> PrefixAnalysis {
    let dfa = trim_of(dfa);
    let n = dfa.num_states();
    let fork_states: BTreeSet<StateId> = (0..n).filter(|&s| dfa.successors(s).count() >= 2).collect();
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in 0..n {
        for (_, t) in dfa.successors(s) {
            rev[t].push(s);
        }
    }
    let mut nc = fork_states.clone();
    let mut stack: Vec<StateId> = nc.iter().copied().collect();
    while let Some(t) = stack.pop() {
        for &s in &rev[t] {
            if nc.insert(s) {
                stack.push(s);
            }
        }
    }
    let accepting: Vec<bool> = (0..n).map(|s| nc.contains(&s)).collect();
    let s_language = dfa.with_accepting(&accepting);
    PrefixAnalysis { dfa, fork_states, nc_states: nc, s_language }
}

pub fn decide_prefix(dfa: &Dfa, config: &DecisionConfig) -> Result<DecisionReport> {
    let analysis = fork_analysis(dfa);
    if !analysis.cyclic_nc_states().is_empty() {
        let words = antichain_branch_witness(&analysis, config.antichain_size)?;
        return Ok(DecisionReport {
            relation: OrderRelation::Prefix,
            verdict: Verdict::NotWqo,
            certificate: Certificate::AntichainSample { words },
            ordinal_bounds: None,
        });
    }
    let d = &analysis.dfa;
    let mut anchors = Vec::new();
    let mut branching = Vec::new();
    let mut s_count = 0usize;
    if let Some(q0) = d.initial() {
        if analysis.nc_states.contains(&q0) {
            // The NC part is acyclic, so this walk is finite.
            let mut stack = vec![(q0, Word::empty())];
            while let Some((q, w)) = stack.pop() {
                s_count += 1;
                if s_count > config.limits.max_output {
                    return Err(Error::OutputBudget { limit: config.limits.max_output });
                }
                if d.is_accepting(q) {
                    branching.push(w.clone());
                }
                for (c, t) in d.successors(q) {
                    let mut wc = w.clone();
                    wc.push(c);
                    if analysis.nc_states.contains(&t) {
                        stack.push((t, wc));
                    } else {
                        anchors.push(wc);
                    }
                }
            }
        } else {
            anchors.push(Word::empty());
        }
    }
    anchors.sort();
    branching.sort();
    let chain_count = anchors.len() + branching.len();
    let bounds = OrdinalBounds {
        height: Bound::at_most(OrdinalExpr::omega()),
        width: Bound::at_most(OrdinalExpr::finite(chain_count as u64)),
        mot: Bound::at_most(OrdinalExpr::new(0, 0, chain_count as u64, s_count as u64)),
    };
    Ok(DecisionReport {
        relation: OrderRelation::Prefix,
        verdict: Verdict::Wqo,
        certificate: Certificate::ChainDecomposition { anchors, branching, chain_count },
        ordinal_bounds: Some(bounds),
    })
}

/// Reverses the language, decides the prefix question and maps every word
/// of the certificate back.
pub fn decide_suffix(dfa: &Dfa, config: &DecisionConfig) -> Result<DecisionReport> {
    let reversed = determinize_trim(&dfa.to_nfa().reverse(), config.limits)?;
    let mut report = decide_prefix(&reversed, config)?;
    report.relation = OrderRelation::Suffix;
    let rev_all = |ws: &mut Vec<Word>| {
        for w in ws.iter_mut() {
            *w = w.reversed();
        }
        ws.sort();
    };
    match &mut report.certificate {
        Certificate::ChainDecomposition { anchors, branching, .. } => {
            rev_all(anchors);
            rev_all(branching);
        }
        Certificate::AntichainSample { words } => {
            for w in words.iter_mut() {
                *w = w.reversed();
            }
        }
        _ => unreachable!("prefix decisions only produce chain or antichain certificates"),
    }
    Ok(report)
}

/// `k` pairwise prefix-incomparable words of `L`, following a lasso `αβ^ω`
/// that stays among NC states and repeatedly leaving it for the shortest
/// accepted word that diverges past the previous divergence point.
pub fn antichain_branch_witness(analysis: &PrefixAnalysis, k: usize) -> Result<Vec<Word>> {
    let d = &analysis.dfa;
    let on_cycle = states_on_cycles(d);
    let q0 = d.initial().ok_or_else(|| Error::Precondition("the language is empty".into()))?;
    // Breadth-first paths from the initial state, in symbol order.
    let paths = bfs_words(d, q0);
    let cycle_state = (0..d.num_states())
        .filter(|&s| on_cycle[s] && analysis.nc_states.contains(&s) && paths[s].is_some())
        .min_by(|&a, &b| paths[a].cmp(&paths[b]))
        .ok_or_else(|| Error::Precondition("the language is well-quasi-ordered by prefixes".into()))?;
    let alpha = paths[cycle_state].clone().unwrap();
    let beta = shortest_cycle(d, cycle_state).expect("state lies on a cycle");
    let branch = |i: usize| -> char {
        if i < alpha.len() {
            alpha.as_slice()[i]
        } else {
            beta.as_slice()[(i - alpha.len()) % beta.len()]
        }
    };
    let norm = |i: usize| if i < alpha.len() { i } else { alpha.len() + (i - alpha.len()) % beta.len() };

    let mut out = Vec::with_capacity(k);
    let mut start = 0usize;
    while out.len() < k {
        let mut state = q0;
        let mut prefix = Word::empty();
        for i in 0..start {
            state = d.step(state, branch(i)).expect("branch stays in the automaton");
            prefix.push(branch(i));
        }
        // Nodes: (state, Some(branch position) while on the branch, None once off).
        type Node = (StateId, Option<usize>);
        let mut seen: BTreeSet<Node> = BTreeSet::new();
        let mut queue: VecDeque<(Node, usize)> = VecDeque::new();
        let mut parent: Vec<(usize, char)> = vec![(usize::MAX, ' ')];
        let root: Node = (state, Some(norm(start)));
        seen.insert(root);
        queue.push_back((root, 0));
        let mut found = None;
        while let Some(((q, pos), id)) = queue.pop_front() {
            if pos.is_none() && d.is_accepting(q) {
                found = Some(id);
                break;
            }
            for (c, t) in d.successors(q) {
                let npos = match pos {
                    Some(i) if branch(i) == c => Some(norm(i + 1)),
                    _ => None,
                };
                if seen.insert((t, npos)) {
                    parent.push((id, c));
                    queue.push_back(((t, npos), parent.len() - 1));
                }
            }
        }
        let mut id = found.expect("every branch node reaches a word of L off the branch");
        let mut tail = Vec::new();
        while parent[id].0 != usize::MAX {
            tail.push(parent[id].1);
            id = parent[id].0;
        }
        tail.reverse();
        let word = prefix.concat(&Word::from(tail));
        let diverge = (0..word.len()).find(|&i| word.as_slice()[i] != branch(i)).expect("word leaves the branch");
        out.push(word);
        start = diverge + 1;
    }
    Ok(out)
}

/// Length-lexicographically least word leading from `from` to each state.
pub(crate) fn bfs_words(d: &Dfa, from: StateId) -> Vec<Option<Word>> {
    let mut words: Vec<Option<Word>> = vec![None; d.num_states()];
    words[from] = Some(Word::empty());
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for (c, t) in d.successors(s) {
            if words[t].is_none() {
                let mut w = words[s].clone().unwrap();
                w.push(c);
                words[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    words
}

/// Length-lexicographically least non-empty word from `s` back to `s`.
pub(crate) fn shortest_cycle(d: &Dfa, s: StateId) -> Option<Word> {
    // Nodes leave the queue in length-lexicographic order of their words, so
    // the first edge back to `s` closes the least cycle.
    let mut words: Vec<Option<Word>> = vec![None; d.num_states()];
    let mut queue = VecDeque::from([(s, Word::empty())]);
    while let Some((u, w)) = queue.pop_front() {
        for (c, t) in d.successors(u) {
            let mut wc = w.clone();
            wc.push(c);
            if t == s {
                return Some(wc);
            }
            if words[t].is_none() {
                words[t] = Some(wc.clone());
                queue.push_back((t, wc));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::Limits;
    use crate::order::is_antichain;
    use crate::regex::Regex;
    use alloc::string::String;

    fn dfa(text: &str) -> Dfa {
        let ab = Alphabet::new(['a', 'b']).unwrap();
        determinize_trim(&Regex::parse(text, &ab).unwrap().compile(), Limits::default()).unwrap()
    }

    fn show(ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| w.display_eps()).collect()
    }

    #[test]
    fn forks_of_a_star_b() {
        let a = fork_analysis(&dfa("a*b"));
        assert_eq!(a.fork_states, BTreeSet::from([0]));
        assert_eq!(a.nc_states, BTreeSet::from([0]));
        assert!(a.s_language.accepts(&Word::from("aaa")));
        assert!(!a.s_language.accepts(&Word::from("ab")));
        assert!(fork_analysis(&dfa("a*")).fork_states.is_empty());
        assert!(fork_analysis(&dfa("(a|b)*")).s_language.accepts(&Word::from("abba")));
    }

    #[test]
    fn a_star_b_is_not_prefix_wqo() {
        let cfg = DecisionConfig::default();
        let r = decide_prefix(&dfa("a*b"), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::NotWqo);
        assert_eq!(show(r.certificate.antichain().unwrap()), ["b", "ab", "aab", "aaab", "aaaab"]);
    }

    #[test]
    fn chains() {
        let cfg = DecisionConfig::default();
        let r = decide_prefix(&dfa("a*"), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Wqo);
        assert!(matches!(r.certificate, Certificate::ChainDecomposition { chain_count: 1, .. }));
        let r = decide_prefix(&dfa("a|ba"), &cfg).unwrap();
        assert!(matches!(r.certificate, Certificate::ChainDecomposition { chain_count: 2, .. }));
        assert_eq!(r.ordinal_bounds.unwrap().width.value, OrdinalExpr::finite(2));
        let r = decide_prefix(&dfa("∅"), &cfg).unwrap();
        assert!(matches!(r.certificate, Certificate::ChainDecomposition { chain_count: 0, .. }));
        let r = decide_prefix(&dfa("a|ab|b(a|b)a*"), &cfg).unwrap();
        match r.certificate {
            Certificate::ChainDecomposition { anchors, branching, chain_count } => {
                assert_eq!(show(&anchors), ["a", "ba", "bb"]);
                assert!(branching.is_empty());
                assert_eq!(chain_count, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn suffix_reverses_witnesses() {
        let cfg = DecisionConfig::default();
        let r = decide_suffix(&dfa("ba*"), &cfg).unwrap();
        assert_eq!(r.relation, OrderRelation::Suffix);
        assert_eq!(show(&r.certificate.antichain().unwrap()[..3]), ["b", "ba", "baa"]);
        assert!(decide_suffix(&dfa("a*"), &cfg).unwrap().verdict.is_wqo());
        assert!(decide_suffix(&dfa("ab"), &cfg).unwrap().verdict.is_wqo());
    }

    #[test]
    fn branch_witness_on_full_language() {
        let a = fork_analysis(&dfa("(a|b)*"));
        let ws = antichain_branch_witness(&a, 3).unwrap();
        assert!(is_antichain(OrderRelation::Prefix, &ws));
        assert_eq!(antichain_branch_witness(&a, 1).unwrap().len(), 1);
        assert!(antichain_branch_witness(&fork_analysis(&dfa("a*")), 2).is_err());
    }
}
