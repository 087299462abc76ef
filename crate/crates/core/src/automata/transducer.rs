//! Rational transductions given by letter-to-letter or ε-labelled pairs.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{Label, Nfa, StateId};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    input: Alphabet,
    output: Alphabet,
    edges: Vec<Vec<(Label, Label, StateId)>>,
    initial: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
}

impl Transducer {
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        Transducer { input, output, edges: Vec::new(), initial: BTreeSet::new(), accepting: BTreeSet::new() }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn add_state(&mut self) -> StateId {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    pub fn add_transition(&mut self, from: StateId, input: Label, output: Label, to: StateId) -> Result<()> {
        if from >= self.edges.len() || to >= self.edges.len() {
            return Err(Error::Malformed(alloc::format!("transition {from} -> {to} uses an undeclared state")));
        }
        for (l, alpha) in [(input, &self.input), (output, &self.output)] {
            if let Label::Sym(c) = l {
                if !alpha.contains(c) {
                    return Err(Error::UnknownSymbol(c));
                }
            }
        }
        self.edges[from].push((input, output, to));
        Ok(())
    }

    pub fn set_initial(&mut self, s: StateId) {
        self.initial.insert(s);
    }

    pub fn set_accepting(&mut self, s: StateId) {
        self.accepting.insert(s);
    }

    /// `w ↦ w` over `alphabet`.
    pub fn identity(alphabet: &Alphabet) -> Self {
        let mut t = Transducer::new(alphabet.clone(), alphabet.clone());
        let s = t.add_state();
        t.set_initial(s);
        t.set_accepting(s);
        for c in alphabet.iter() {
            t.add_transition(s, Label::Sym(c), Label::Sym(c), s).unwrap();
        }
        t
    }

    /// `w ↦ marker·w`; the marker must be fresh.
    pub fn marker(alphabet: &Alphabet, marker: char) -> Result<Self> {
        let out = alphabet.with_symbol(marker)?;
        let mut t = Transducer::new(alphabet.clone(), out);
        let s0 = t.add_state();
        let s1 = t.add_state();
        t.set_initial(s0);
        t.set_accepting(s1);
        t.add_transition(s0, Label::Eps, Label::Sym(marker), s1)?;
        for c in alphabet.iter() {
            t.add_transition(s1, Label::Sym(c), Label::Sym(c), s1)?;
        }
        Ok(t)
    }

    /// The full relation `Σ* × {a,b}*`.
    pub fn full_image(alphabet: &Alphabet) -> Self {
        let out = Alphabet::new(['a', 'b']).unwrap();
        let mut t = Transducer::new(alphabet.clone(), out);
        let s = t.add_state();
        t.set_initial(s);
        t.set_accepting(s);
        for c in alphabet.iter() {
            t.add_transition(s, Label::Sym(c), Label::Eps, s).unwrap();
        }
        for c in ['a', 'b'] {
            t.add_transition(s, Label::Eps, Label::Sym(c), s).unwrap();
        }
        t
    }
}

/// The image `{ v : ∃u ∈ L(n), (u, v) ∈ t }`.
pub fn apply_transducer(t: &Transducer, n: &Nfa) -> Result<Nfa> {
    if t.input != *n.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = Nfa::new(t.output.clone());
    let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut get = |out: &mut Nfa, queue: &mut VecDeque<(StateId, StateId)>, key| {
        *ids.entry(key).or_insert_with(|| {
            queue.push_back(key);
            out.add_state()
        })
    };
    for &p in n.initial() {
        for &q in &t.initial {
            let id = get(&mut out, &mut queue, (p, q));
            out.set_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let id = get(&mut out, &mut queue, (p, q));
        if n.accepting().contains(&p) && t.accepting.contains(&q) {
            out.set_accepting(id);
        }
        for &(l, p2) in n.edges(p) {
            if l == Label::Eps {
                let to = get(&mut out, &mut queue, (p2, q));
                out.add_transition(id, Label::Eps, to);
            }
        }
        for &(inp, outp, q2) in &t.edges[q] {
            match inp {
                Label::Eps => {
                    let to = get(&mut out, &mut queue, (p, q2));
                    out.add_transition(id, outp, to);
                }
                Label::Sym(_) => {
                    for &(l, p2) in n.edges(p) {
                        if l == inp {
                            let to = get(&mut out, &mut queue, (p2, q2));
                            out.add_transition(id, outp, to);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
