//! Context-free grammars.
//!
//! Text format, one rule per line:
//!
//! ```text
//! S -> a S b | eps
//! ```
//!
//! Tokens are separated by whitespace. A token with an uppercase initial is
//! a nonterminal, any other single character is a terminal and `eps` stands
//! for the empty word. The first rule names the start symbol. Lines starting
//! with `//` are comments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Dfa, Limits};
use crate::error::{Error, Result};

mod analysis;
mod intersect;

pub use analysis::{cfg_bounded, cfg_subword_closure, decide_cfg, pump_pairs};
pub use intersect::cfg_intersect_regular;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T(char),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    names: Vec<String>,
    terminals: Alphabet,
    productions: Vec<Production>,
    start: usize,
    reduced: bool,
}

impl Cfg {
    /// A grammar with only its start symbol and no productions.
    pub fn new(terminals: Alphabet, start: &str) -> Self {
        Cfg { names: vec![start.to_string()], terminals, productions: Vec::new(), start: 0, reduced: false }
    }

    /// Index of the nonterminal called `name`, declaring it if needed.
    pub fn nonterminal(&mut self, name: &str) -> usize {
        match self.names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    /// A nonterminal whose name starts with `base` and is not yet used.
    pub fn fresh_nonterminal(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        let mut k = 0;
        while self.names.contains(&name) {
            k += 1;
            name = format!("{base}{k}");
        }
        self.nonterminal(&name)
    }

    pub fn add_production(&mut self, lhs: usize, rhs: Vec<Symbol>) -> Result<()> {
        for s in &rhs {
            match *s {
                Symbol::T(c) if !self.terminals.contains(c) => return Err(Error::UnknownSymbol(c)),
                Symbol::N(n) if n >= self.names.len() => return Err(Error::UndefinedNonterminal(format!("#{n}"))),
                _ => {}
            }
        }
        if lhs >= self.names.len() {
            return Err(Error::UndefinedNonterminal(format!("#{lhs}")));
        }
        self.productions.push(Production { lhs, rhs });
        self.reduced = false;
        Ok(())
    }

    pub fn set_start(&mut self, s: usize) {
        self.start = s;
        self.reduced = false;
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, n: usize) -> &str {
        &self.names[n]
    }

    pub fn num_nonterminals(&self) -> usize {
        self.names.len()
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, n: usize) -> impl Iterator<Item = &Production> + '_ {
        self.productions.iter().filter(move |p| p.lhs == n)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The same grammar over a larger terminal alphabet.
    pub fn with_terminals(&self, terminals: Alphabet) -> Result<Cfg> {
        for c in self.terminals.iter() {
            if !terminals.contains(c) {
                return Err(Error::AlphabetMismatch);
            }
        }
        let mut g = self.clone();
        g.terminals = terminals;
        Ok(g)
    }

    /// Mirror image: every right-hand side reversed.
    pub fn reversed(&self) -> Cfg {
        let mut g = self.clone();
        for p in &mut g.productions {
            p.rhs.reverse();
        }
        g
    }

    /// `marker · L`, with a new start symbol.
    pub fn with_marker(&self, marker: char) -> Result<Cfg> {
        let mut g = self.clone();
        g.terminals = self.terminals.with_symbol(marker)?;
        let old = g.start;
        let s = g.fresh_nonterminal("Marked");
        g.add_production(s, vec![Symbol::T(marker), Symbol::N(old)])?;
        g.start = s;
        Ok(g)
    }

    /// The right-linear grammar of a DFA: `Qi -> c Qj` per transition and
    /// `Qi -> eps` per accepting state.
    pub fn from_dfa(d: &Dfa) -> Cfg {
        let mut g = Cfg::new(d.alphabet().clone(), "Q0");
        g.names = (0..d.num_states().max(1)).map(|i| format!("Q{i}")).collect();
        if let Some(q0) = d.initial() {
            g.start = q0;
            for s in 0..d.num_states() {
                for (c, t) in d.successors(s) {
                    g.productions.push(Production { lhs: s, rhs: vec![Symbol::T(c), Symbol::N(t)] });
                }
                if d.is_accepting(s) {
                    g.productions.push(Production { lhs: s, rhs: Vec::new() });
                }
            }
        }
        g
    }

    fn symbol_text(&self, s: Symbol) -> String {
        match s {
            Symbol::T(c) => c.to_string(),
            Symbol::N(n) => self.names[n].clone(),
        }
    }
}

impl fmt::Display for Cfg {
    /// Start rules first, then the other nonterminals in index order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = core::iter::once(self.start).chain((0..self.names.len()).filter(|&n| n != self.start));
        for n in order {
            let alts: Vec<String> = self
                .productions_of(n)
                .map(|p| {
                    if p.rhs.is_empty() {
                        "eps".to_string()
                    } else {
                        p.rhs.iter().map(|&s| self.symbol_text(s)).collect::<Vec<_>>().join(" ")
                    }
                })
                .collect();
            if !alts.is_empty() {
                writeln!(f, "{} -> {}", self.names[n], alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

fn is_nonterminal_token(t: &str) -> bool {
    t.chars().next().is_some_and(char::is_uppercase)
        && t.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Parses a grammar, taking the terminals that occur as its alphabet.
pub fn parse_cfg(text: &str) -> Result<Cfg> {
    parse_cfg_impl(text, None)
}

/// Parses a grammar over a given terminal alphabet.
pub fn parse_cfg_over(text: &str, alphabet: &Alphabet) -> Result<Cfg> {
    parse_cfg_impl(text, Some(alphabet))
}

fn parse_cfg_impl(text: &str, alphabet: Option<&Alphabet>) -> Result<Cfg> {
    struct Rule<'a> {
        lhs: &'a str,
        alts: Vec<Vec<(&'a str, usize)>>,
    }
    let mut rules: Vec<Rule> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let arrow = line.find("->").ok_or_else(|| Error::Syntax {
            offset: line_start,
            message: "expected 'Nonterminal -> alternatives'".into(),
        })?;
        let lhs = line[..arrow].trim();
        if !is_nonterminal_token(lhs) {
            return Err(Error::Syntax {
                offset: line_start,
                message: format!("'{lhs}' is not a nonterminal name"),
            });
        }
        let mut alts = Vec::new();
        let mut pos = line_start + arrow + 2;
        for alt in line[arrow + 2..].split('|') {
            let mut tokens = Vec::new();
            let mut inner = 0;
            for tok in alt.split_whitespace() {
                let at = pos + alt[inner..].find(tok).unwrap() + inner;
                inner = at - pos + tok.len();
                tokens.push((tok, at));
            }
            if tokens.is_empty() {
                return Err(Error::Syntax { offset: pos, message: "empty alternative; write 'eps'".into() });
            }
            alts.push(tokens);
            pos += alt.len() + 1;
        }
        rules.push(Rule { lhs, alts });
    }
    let Some(first) = rules.first() else {
        return Err(Error::Syntax { offset: 0, message: "no rules".into() });
    };

    let mut terminals: BTreeSet<char> = BTreeSet::new();
    let mut defined: BTreeMap<&str, usize> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    for r in &rules {
        if !defined.contains_key(r.lhs) {
            defined.insert(r.lhs, names.len());
            names.push(r.lhs.to_string());
        }
    }
    let mut productions = Vec::new();
    for r in &rules {
        let lhs = defined[r.lhs];
        for alt in &r.alts {
            let mut rhs = Vec::new();
            for &(tok, at) in alt {
                if tok == "eps" {
                    continue;
                }
                if is_nonterminal_token(tok) {
                    let n = *defined.get(tok).ok_or_else(|| Error::UndefinedNonterminal(tok.to_string()))?;
                    rhs.push(Symbol::N(n));
                } else {
                    let mut cs = tok.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => {
                            terminals.insert(c);
                            rhs.push(Symbol::T(c));
                        }
                        _ => {
                            return Err(Error::Syntax { offset: at, message: format!("unexpected token '{tok}'") })
                        }
                    }
                }
            }
            productions.push(Production { lhs, rhs });
        }
    }
    let terminals = match alphabet {
        Some(a) => {
            if let Some(&c) = terminals.iter().find(|&&c| !a.contains(c)) {
                return Err(Error::UnknownSymbol(c));
            }
            a.clone()
        }
        None => Alphabet::new(terminals)?,
    };
    let start = defined[first.lhs];
    Ok(Cfg { names, terminals, productions, start, reduced: false })
}

/// Nonterminals that derive some terminal word.
pub fn productive(g: &Cfg) -> Vec<bool> {
    let mut prod = vec![false; g.num_nonterminals()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in &g.productions {
            if !prod[p.lhs] && p.rhs.iter().all(|s| matches!(*s, Symbol::T(_)) || matches!(*s, Symbol::N(n) if prod[n])) {
                prod[p.lhs] = true;
                changed = true;
            }
        }
    }
    prod
}

/// Removes unproductive and unreachable nonterminals. An unproductive start
/// yields the grammar with the start symbol alone and no productions.
pub fn reduce_cfg(g: &Cfg) -> Cfg {
    let prod = productive(g);
    if !prod[g.start] {
        let mut out = Cfg::new(g.terminals.clone(), &g.names[g.start]);
        out.reduced = true;
        return out;
    }
    let live: Vec<&Production> =
        g.productions.iter().filter(|p| prod[p.lhs] && p.rhs.iter().all(|s| !matches!(*s, Symbol::N(n) if !prod[n]))).collect();
    let mut reach = vec![false; g.num_nonterminals()];
    reach[g.start] = true;
    let mut stack = vec![g.start];
    while let Some(n) = stack.pop() {
        for p in live.iter().filter(|p| p.lhs == n) {
            for s in &p.rhs {
                if let Symbol::N(m) = *s {
                    if !reach[m] {
                        reach[m] = true;
                        stack.push(m);
                    }
                }
            }
        }
    }
    let mut map = vec![usize::MAX; g.num_nonterminals()];
    let mut names = Vec::new();
    for n in 0..g.num_nonterminals() {
        if reach[n] {
            map[n] = names.len();
            names.push(g.names[n].clone());
        }
    }
    let productions = live
        .iter()
        .filter(|p| reach[p.lhs])
        .map(|p| Production {
            lhs: map[p.lhs],
            rhs: p
                .rhs
                .iter()
                .map(|&s| match s {
                    Symbol::N(n) => Symbol::N(map[n]),
                    t => t,
                })
                .collect(),
        })
        .collect();
    Cfg { names, terminals: g.terminals.clone(), productions, start: map[g.start], reduced: true }
}

/// The length-lex least word derived by each nonterminal.
pub fn shortest_words(g: &Cfg) -> Vec<Option<Word>> {
    let mut best: Vec<Option<Word>> = vec![None; g.num_nonterminals()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in &g.productions {
            let mut w: Vec<char> = Vec::new();
            let mut ok = true;
            for s in &p.rhs {
                match *s {
                    Symbol::T(c) => w.push(c),
                    Symbol::N(n) => match &best[n] {
                        Some(x) => w.extend(x.iter()),
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if ok {
                let w = Word::from(w);
                if best[p.lhs].as_ref().is_none_or(|b| w < *b) {
                    best[p.lhs] = Some(w);
                    changed = true;
                }
            }
        }
    }
    best
}

/// Whether the language is empty; otherwise its length-lex least word.
pub fn cfg_is_empty(g: &Cfg) -> (bool, Option<Word>) {
    let w = shortest_words(g).swap_remove(g.start);
    (w.is_none(), w)
}

/// All words of length at most `maxlen`, in length-lex order.
pub fn cfg_enumerate(g: &Cfg, maxlen: usize, limits: Limits) -> Result<Vec<Word>> {
    let g = reduce_cfg(g);
    let nn = g.num_nonterminals();
    let minlen: Vec<usize> = shortest_words(&g).iter().map(|w| w.as_ref().map_or(usize::MAX, Word::len)).collect();
    // table[n][len]
    let mut table: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); maxlen + 1]; nn];
    let mut total = 0usize;
    for len in 0..=maxlen {
        loop {
            let mut fresh: Vec<(usize, Word)> = Vec::new();
            for p in &g.productions {
                let mut need = vec![0usize; p.rhs.len() + 1];
                for i in (0..p.rhs.len()).rev() {
                    let m = match p.rhs[i] {
                        Symbol::T(_) => 1,
                        Symbol::N(n) => minlen[n],
                    };
                    need[i] = need[i + 1].saturating_add(m);
                }
                if need[0] > len {
                    continue;
                }
                let mut out = Vec::new();
                expand(&p.rhs, &need, 0, len, &mut Vec::new(), &table, &mut out);
                for w in out {
                    if !table[p.lhs][len].contains(&w) {
                        fresh.push((p.lhs, w));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for (n, w) in fresh {
                if table[n][len].insert(w) {
                    total += 1;
                    if total > limits.max_output {
                        return Err(Error::OutputBudget { limit: limits.max_output });
                    }
                }
            }
        }
    }
    Ok(table[g.start].iter().flat_map(|level| level.iter().cloned()).collect())
}

fn expand(
    rhs: &[Symbol],
    need: &[usize],
    i: usize,
    remaining: usize,
    prefix: &mut Vec<char>,
    table: &[Vec<BTreeSet<Word>>],
    out: &mut Vec<Word>,
) {
    if i == rhs.len() {
        if remaining == 0 {
            out.push(Word::from(prefix.clone()));
        }
        return;
    }
    match rhs[i] {
        Symbol::T(c) => {
            if remaining > need[i + 1] {
                prefix.push(c);
                expand(rhs, need, i + 1, remaining - 1, prefix, table, out);
                prefix.pop();
            }
        }
        Symbol::N(n) => {
            let lo = need[i] - need[i + 1];
            if remaining < need[i] {
                return;
            }
            for l in lo..=remaining - need[i + 1] {
                for w in &table[n][l] {
                    let mark = prefix.len();
                    prefix.extend(w.iter());
                    expand(rhs, need, i + 1, remaining - l, prefix, table, out);
                    prefix.truncate(mark);
                }
            }
        }
    }
}
