use std::collections::BTreeSet;

use proptest::prelude::*;
use wqo_core::automata::{determinize_trim, enumerate, Label};
use wqo_core::decision::{bounded_cover, decide_dfa};
use wqo_core::grammar::{
    cfg_bounded, cfg_enumerate, cfg_intersect_regular, cfg_is_empty, cfg_subword_closure, decide_cfg, parse_cfg_over,
};
use wqo_core::order::{is_antichain, is_subword, OrderRelation};
use wqo_core::{Alphabet, Certificate, Cfg, DecisionConfig, Dfa, Limits, Nfa, Regex, Verdict, Word};

fn ab() -> Alphabet {
    Alphabet::new(['a', 'b']).unwrap()
}

const CORPUS: [&str; 8] = [
    "S -> a S b | eps",
    "S -> a S a | b S b | a | b | eps",
    "S -> S S | a S b | eps",
    "S -> S S | a",
    "S -> A B\nA -> a A | eps\nB -> b B | b",
    "S -> a S b b | a b",
    "S -> A S A | b\nA -> a",
    "S -> a S | S b | eps",
];

fn grammar(text: &str) -> Cfg {
    parse_cfg_over(text, &ab()).unwrap()
}

fn lim() -> Limits {
    Limits::default()
}

fn regex_dfa(text: &str) -> Dfa {
    determinize_trim(&Regex::parse(text, &ab()).unwrap().compile(), lim()).unwrap()
}

fn set(ws: Vec<Word>) -> BTreeSet<Word> {
    ws.into_iter().collect()
}

// All derivations up to length n, by expanding sentential forms leftmost.
// Independent of the library's table-based enumeration.
fn derive(text: &str, n: usize) -> BTreeSet<Word> {
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    for line in text.lines() {
        let (lhs, rhs) = line.split_once("->").unwrap();
        for alt in rhs.split('|') {
            let toks: Vec<String> = alt.split_whitespace().filter(|t| *t != "eps").map(String::from).collect();
            rules.push((lhs.trim().to_string(), toks));
        }
    }
    let start = rules[0].0.clone();
    let is_nt = |t: &str| t.chars().next().unwrap().is_uppercase();
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![vec![start]];
    while let Some(form) = stack.pop() {
        let terminals = form.iter().filter(|t| !is_nt(t)).count();
        // Nonterminals here all derive a non-empty word or ε; bound the form
        // length generously to cut off unproductive growth.
        if terminals > n || form.len() > 2 * n + 4 || !seen.insert(form.clone()) {
            continue;
        }
        match form.iter().position(|t| is_nt(t)) {
            None => {
                out.insert(form.concat().chars().collect::<Word>());
            }
            Some(i) => {
                for (lhs, rhs) in &rules {
                    if *lhs == form[i] {
                        let mut next = form[..i].to_vec();
                        next.extend(rhs.iter().cloned());
                        next.extend(form[i + 1..].iter().cloned());
                        stack.push(next);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_derivations() {
    for text in CORPUS {
        let g = grammar(text);
        assert_eq!(set(cfg_enumerate(&g, 7, lim()).unwrap()), derive(text, 7), "{text}");
    }
}

#[test]
fn intersection_matches_enumeration() {
    let regexes = ["a*b*", "(a|b)*", "(ab)*", "a(a|b)*", "(a|b)*b(a|b)", "b*", "(aa|b)*", "∅", "eps"];
    for text in CORPUS {
        let g = grammar(text);
        let gw = set(cfg_enumerate(&g, 8, lim()).unwrap());
        for r in regexes {
            let d = regex_dfa(r);
            let i = cfg_intersect_regular(&g, &d, lim()).unwrap();
            let dw = set(enumerate(&d.to_nfa(), 8, lim()).unwrap());
            let expected: BTreeSet<Word> = gw.intersection(&dw).cloned().collect();
            assert_eq!(set(cfg_enumerate(&i, 8, lim()).unwrap()), expected, "{text} ∩ {r}");
            assert_eq!(cfg_is_empty(&i).0, cfg_is_empty(&i).1.is_none());
        }
    }
}

fn subwords(w: &Word) -> BTreeSet<Word> {
    let v = w.as_slice();
    (0u32..1 << v.len())
        .map(|mask| (0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect())
        .collect()
}

#[test]
fn subword_closure_both_ways() {
    for text in CORPUS {
        let g = grammar(text);
        let c = cfg_subword_closure(&g, lim()).unwrap();
        for w in cfg_enumerate(&g, 10, lim()).unwrap() {
            for s in subwords(&w) {
                assert!(c.accepts(&s), "{text}: {s} below {w}");
            }
        }
        let long = cfg_enumerate(&g, 18, lim()).unwrap();
        for w in enumerate(&c, 6, lim()).unwrap() {
            assert!(long.iter().any(|v| is_subword(&w, v)), "{text}: {w} has no witness");
        }
    }
}

#[test]
fn bounded_certificates_verify() {
    let expected = [true, false, false, true, true, true, true, true];
    for (text, bounded) in CORPUS.iter().zip(expected) {
        let g = grammar(text);
        let cert = cfg_bounded(&g, lim()).unwrap();
        assert_eq!(cert.bounded, bounded, "{text}");
        if cert.bounded {
            let cover = bounded_cover(&cert.words, &ab()).unwrap();
            let outside = determinize_trim(&cover, lim()).unwrap().complement();
            assert!(cfg_is_empty(&cfg_intersect_regular(&g, &outside, lim()).unwrap()).0, "{text}");
            for w in cfg_enumerate(&g, 10, lim()).unwrap() {
                assert!(cover.accepts(&w), "{text}: {w}");
            }
        } else {
            let (_, u, v) = cert.witness.unwrap();
            assert_ne!(u.concat(&v), v.concat(&u), "{text}");
        }
    }
    let cert = cfg_bounded(&grammar(CORPUS[0]), lim()).unwrap();
    assert_eq!(cert.words, vec![Word::from("a"), Word::from("b")]);
}

#[test]
fn grammar_decisions() {
    let config = DecisionConfig { antichain_size: 8, ..DecisionConfig::default() };
    let r = decide_cfg(&grammar(CORPUS[0]), OrderRelation::Infix, &config).unwrap();
    assert_eq!(r.verdict, Verdict::Wqo);
    let r = decide_cfg(&grammar(CORPUS[1]), OrderRelation::Infix, &config).unwrap();
    assert_eq!(r.verdict, Verdict::NotWqo);
    let ac: BTreeSet<Word> = r.certificate.antichain().unwrap().iter().cloned().collect();
    let expected: BTreeSet<Word> = (1..=8).map(|i| Word::from(format!("a{}a", "b".repeat(i)).as_str())).collect();
    assert_eq!(ac, expected);
    // The empty grammar is wqo under every relation.
    let empty = grammar("S -> a S");
    for rel in OrderRelation::ALL {
        assert_eq!(decide_cfg(&empty, rel, &config).unwrap().verdict, Verdict::Wqo);
    }
    for text in CORPUS {
        for rel in [OrderRelation::Prefix, OrderRelation::Suffix, OrderRelation::Infix] {
            let r = decide_cfg(&grammar(text), rel, &config).unwrap();
            if let Some(ac) = r.certificate.antichain() {
                assert!(is_antichain(rel, ac), "{text} {rel}");
                let g = grammar(text);
                let words = set(cfg_enumerate(&g, ac.iter().map(Word::len).max().unwrap(), lim()).unwrap());
                assert!(ac.iter().all(|w| words.contains(w)), "{text} {rel}");
            }
        }
    }
    // a^n b^n for distinct n are pairwise prefix-incomparable.
    assert_eq!(decide_cfg(&grammar(CORPUS[0]), OrderRelation::Prefix, &config).unwrap().verdict, Verdict::NotWqo);
}

/// Right-linear grammar to NFA, one state per nonterminal plus a final state.
fn right_linear_nfa(rules: &[(usize, Option<(char, usize)>)], n: usize) -> Nfa {
    let mut nfa = Nfa::new(ab());
    for _ in 0..=n {
        nfa.add_state();
    }
    nfa.set_initial(0);
    nfa.set_accepting(n);
    for &(lhs, rhs) in rules {
        match rhs {
            Some((c, t)) => nfa.add_transition(lhs, Label::Sym(c), t),
            None => nfa.add_transition(lhs, Label::Eps, n),
        }
    }
    nfa
}

fn render(rules: &[(usize, Option<(char, usize)>)]) -> String {
    let mut by_lhs: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
    for &(lhs, rhs) in rules {
        by_lhs.entry(lhs).or_default().push(match rhs {
            Some((c, t)) => format!("{c} Q{t}"),
            None => "eps".into(),
        });
    }
    let mut lines: Vec<String> = by_lhs.iter().map(|(l, alts)| format!("Q{l} -> {}", alts.join(" | "))).collect();
    // The start rule comes first; nonterminals without rules must still be defined.
    if !by_lhs.contains_key(&0) {
        lines.insert(0, "Q0 -> a Q0".into());
    }
    let defined: BTreeSet<usize> = by_lhs.keys().copied().chain([0]).collect();
    for &(_, rhs) in rules {
        if let Some((_, t)) = rhs {
            if !defined.contains(&t) {
                lines.push(format!("Q{t} -> a Q{t}"));
            }
        }
    }
    lines.join("\n")
}

fn right_linear() -> impl Strategy<Value = (Vec<(usize, Option<(char, usize)>)>, usize)> {
    (1usize..=3).prop_flat_map(|n| {
        let rule = (0..n, proptest::option::weighted(0.8, (prop_oneof![Just('a'), Just('b')], 0..n)));
        (proptest::collection::vec(rule, 1..=6), Just(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn regular_grammars_agree_with_automata((rules, n) in right_linear()) {
        let text = render(&rules);
        let mut rules = rules;
        // Filler rules from `render` must reach the oracle as well.
        for line in text.lines() {
            if let Some((lhs, rhs)) = line.split_once(" -> a Q") {
                let l: usize = lhs[1..].parse().unwrap();
                if rhs.parse::<usize>().ok() == Some(l) && !rules.iter().any(|r| r.0 == l) {
                    rules.push((l, Some(('a', l))));
                }
            }
        }
        let g = grammar(&text);
        let dfa = determinize_trim(&right_linear_nfa(&rules, n), lim()).unwrap();
        let config = DecisionConfig::default();
        prop_assert_eq!(
            set(cfg_enumerate(&g, 8, lim()).unwrap()),
            set(enumerate(&dfa.to_nfa(), 8, lim()).unwrap())
        );
        for rel in [OrderRelation::Prefix, OrderRelation::Suffix, OrderRelation::Infix] {
            let a = decide_cfg(&g, rel, &config).unwrap().verdict;
            let b = decide_dfa(rel, &dfa, &config).unwrap().verdict;
            prop_assert_eq!(a, b, "{} {}", text, rel);
        }
    }
}

#[test]
fn grammar_certificates_on_regular_corpus() {
    let regular = [
        "S -> a S | b T\nT -> b T | eps",
        "S -> a b S | eps",
        "S -> a S | b S | eps",
        "S -> a A | b B\nA -> a A | eps\nB -> b B | a B | eps",
        "S -> a S | b A\nA -> a A | eps",
        "S -> a A\nA -> b S | b",
        "S -> b S | a",
        "S -> a S | b S | a",
        "S -> a A | eps\nA -> a S",
        "S -> a B\nB -> b B | a C\nC -> eps",
        "S -> A S | eps\nA -> a b",
    ];
    let regexes = ["a*bb*", "(ab)*", "(a|b)*", "a(a)*|b(a|b)*", "a*ba*", "(ab)*ab", "b*a", "(a|b)*a", "(aa)*", "ab*a", "(ab)*"];
    let config = DecisionConfig::default();
    for (text, r) in regular.iter().zip(regexes) {
        let g = grammar(text);
        let d = regex_dfa(r);
        assert_eq!(set(cfg_enumerate(&g, 9, lim()).unwrap()), set(enumerate(&d.to_nfa(), 9, lim()).unwrap()), "{text}");
        let gr = decide_cfg(&g, OrderRelation::Infix, &config).unwrap_or_else(|e| panic!("{text}: {e}"));
        let dr = decide_dfa(OrderRelation::Infix, &d, &config).unwrap();
        assert_eq!(gr.verdict, dr.verdict, "{text}");
        if gr.verdict == Verdict::Wqo {
            assert!(matches!(gr.certificate, Certificate::RInclusion { .. }));
        }
    }
}
