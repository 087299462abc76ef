//! Regular expressions over a declared alphabet.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! union   := concat ('|' concat)*
//! concat  := postfix postfix*
//! postfix := atom ('*' | '+' | '?')*
//! atom    := '(' union ')' | "eps" | '∅' | '\' char | char
//! ```
//!
//! The keyword `eps` wins over the letters `e`, `p`, `s`; write `\e` for the
//! symbol `e` when it is followed by `ps`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabet;
use crate::automata::{Label, Nfa};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexNode {
    Empty,
    Epsilon,
    Symbol(char),
    Concat(Box<RegexNode>, Box<RegexNode>),
    Union(Box<RegexNode>, Box<RegexNode>),
    Star(Box<RegexNode>),
    Plus(Box<RegexNode>),
    Optional(Box<RegexNode>),
}

impl RegexNode {
    pub fn concat(a: RegexNode, b: RegexNode) -> RegexNode {
        RegexNode::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: RegexNode, b: RegexNode) -> RegexNode {
        RegexNode::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: RegexNode) -> RegexNode {
        RegexNode::Star(Box::new(a))
    }

    fn for_each_symbol(&self, f: &mut impl FnMut(char)) {
        match self {
            RegexNode::Empty | RegexNode::Epsilon => {}
            RegexNode::Symbol(c) => f(*c),
            RegexNode::Concat(a, b) | RegexNode::Union(a, b) => {
                a.for_each_symbol(f);
                b.for_each_symbol(f);
            }
            RegexNode::Star(a) | RegexNode::Plus(a) | RegexNode::Optional(a) => a.for_each_symbol(f),
        }
    }
}

/// A parsed regular expression together with its alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regex {
    pub alphabet: Alphabet,
    pub root: RegexNode,
}

const SPECIAL: &[char] = &['|', '*', '+', '?', '(', ')', '\\', '∅'];

impl Regex {
    /// Parses `text`; every symbol must belong to `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Regex> {
        let root = parse_node(text)?;
        let mut bad = None;
        root.for_each_symbol(&mut |c| {
            if bad.is_none() && !alphabet.contains(c) {
                bad = Some(c);
            }
        });
        if let Some(c) = bad {
            return Err(Error::UnknownSymbol(c));
        }
        Ok(Regex { alphabet: alphabet.clone(), root })
    }

    /// Parses `text` and takes the set of symbols it mentions as alphabet.
    pub fn parse_inferring(text: &str) -> Result<Regex> {
        let root = parse_node(text)?;
        let mut syms = Vec::new();
        root.for_each_symbol(&mut |c| syms.push(c));
        let alphabet = Alphabet::from_chars(syms)?;
        Ok(Regex { alphabet, root })
    }

    /// Thompson-style construction.
    pub fn compile(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.clone());
        let (s, t) = build(&self.root, &mut nfa);
        nfa.set_initial(s);
        nfa.set_accepting(t);
        nfa
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(&self.root, 0))
    }
}

fn build(node: &RegexNode, nfa: &mut Nfa) -> (usize, usize) {
    let s = nfa.add_state();
    let t = nfa.add_state();
    match node {
        RegexNode::Empty => {}
        RegexNode::Epsilon => nfa.add_transition(s, Label::Eps, t),
        RegexNode::Symbol(c) => nfa.add_transition(s, Label::Sym(*c), t),
        RegexNode::Concat(a, b) => {
            let (s1, t1) = build(a, nfa);
            let (s2, t2) = build(b, nfa);
            nfa.add_transition(s, Label::Eps, s1);
            nfa.add_transition(t1, Label::Eps, s2);
            nfa.add_transition(t2, Label::Eps, t);
        }
        RegexNode::Union(a, b) => {
            for sub in [a, b] {
                let (s1, t1) = build(sub, nfa);
                nfa.add_transition(s, Label::Eps, s1);
                nfa.add_transition(t1, Label::Eps, t);
            }
        }
        RegexNode::Star(a) | RegexNode::Plus(a) | RegexNode::Optional(a) => {
            let (s1, t1) = build(a, nfa);
            nfa.add_transition(s, Label::Eps, s1);
            nfa.add_transition(t1, Label::Eps, t);
            if !matches!(node, RegexNode::Plus(_)) {
                nfa.add_transition(s, Label::Eps, t);
            }
            if !matches!(node, RegexNode::Optional(_)) {
                nfa.add_transition(t1, Label::Eps, s1);
            }
        }
    }
    (s, t)
}

// Precedence levels: 0 union, 1 concatenation, 2 postfix operand.
fn print(node: &RegexNode, level: u8) -> String {
    let (own, text) = match node {
        RegexNode::Empty => (3, String::from("∅")),
        RegexNode::Epsilon => (3, String::from("eps")),
        RegexNode::Symbol(c) => {
            let escape = SPECIAL.contains(c) || c.is_whitespace() || *c == 'e';
            (3, if escape { format!("\\{c}") } else { c.to_string() })
        }
        RegexNode::Union(a, b) => (0, format!("{}|{}", print(a, 0), print(b, 1))),
        RegexNode::Concat(a, b) => (1, format!("{}{}", print(a, 1), print(b, 2))),
        RegexNode::Star(a) => (2, format!("{}*", print(a, 2))),
        RegexNode::Plus(a) => (2, format!("{}+", print(a, 2))),
        RegexNode::Optional(a) => (2, format!("{}?", print(a, 2))),
    };
    if own < level {
        format!("({text})")
    } else {
        text
    }
}

fn parse_node(text: &str) -> Result<RegexNode> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let node = p.union()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected ')'"));
    }
    Ok(node)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<RegexNode> {
        let mut node = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concat()?;
            node = RegexNode::union(node, rhs);
        }
        Ok(node)
    }

    fn concat(&mut self) -> Result<RegexNode> {
        let mut node = self.postfix()?;
        while matches!(self.peek(), Some(c) if c != '|' && c != ')') {
            let rhs = self.postfix()?;
            node = RegexNode::concat(node, rhs);
        }
        Ok(node)
    }

    fn postfix(&mut self) -> Result<RegexNode> {
        let mut node = self.atom()?;
        loop {
            node = match self.peek() {
                Some('*') => RegexNode::Star(Box::new(node)),
                Some('+') => RegexNode::Plus(Box::new(node)),
                Some('?') => RegexNode::Optional(Box::new(node)),
                _ => return Ok(node),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<RegexNode> {
        let c = match self.peek() {
            None => return Err(self.error("expected an expression")),
            Some(c) => c,
        };
        match c {
            '(' => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            '|' | ')' => Err(self.error("expected an expression")),
            '*' | '+' | '?' => Err(self.error("nothing to repeat")),
            '∅' => {
                self.pos += 1;
                Ok(RegexNode::Empty)
            }
            '\\' => {
                self.pos += 1;
                match self.chars.get(self.pos).copied() {
                    Some(e) => {
                        self.pos += 1;
                        Ok(RegexNode::Symbol(e))
                    }
                    None => Err(self.error("dangling escape")),
                }
            }
            _ => {
                if self.chars[self.pos..].starts_with(&['e', 'p', 's']) {
                    self.pos += 3;
                    return Ok(RegexNode::Epsilon);
                }
                self.pos += 1;
                Ok(RegexNode::Symbol(c))
            }
        }
    }
}
