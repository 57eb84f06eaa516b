//! Counting and enumerating reduced words accepted by a deterministic automaton.
//!
//! Every membership test in this crate (Stallings graphs, Schreier graphs of
//! finite actions, abelian kernels) is a deterministic automaton reading a
//! reduced word left to right. Sphere counts are then a dynamic program over
//! `(automaton state, last letter)` pairs, which never materializes the ambient
//! ball of `F_k`.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::space::{Letter, Word};

pub trait WordAutomaton {
    type State: Clone + Eq + Hash;

    fn rank(&self) -> usize;

    fn start(&self) -> Self::State;

    /// Transition on one letter; `None` kills the run.
    fn step(&self, state: &Self::State, letter: Letter) -> Option<Self::State>;

    fn accepts(&self, state: &Self::State) -> bool;

    /// May return `false` only if no word of length at most `steps` leads from
    /// `state` to an accepting state. Used to prune the search.
    fn may_accept_within(&self, _state: &Self::State, _steps: usize) -> bool {
        true
    }
}

/// Runs the automaton on a word.
pub fn accepts_word<A: WordAutomaton>(aut: &A, w: &Word) -> bool {
    let mut s = aut.start();
    for &l in w.letters() {
        match aut.step(&s, l) {
            Some(next) => s = next,
            None => return false,
        }
    }
    aut.accepts(&s)
}

/// Number of accepted reduced words of each length `0..=nmax`.
pub fn count_by_length<A: WordAutomaton>(aut: &A, nmax: usize) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); nmax + 1];
    let start = aut.start();
    if aut.accepts(&start) {
        counts[0] = BigUint::one();
    }
    if !aut.may_accept_within(&start, nmax) {
        return counts;
    }
    let mut layer: HashMap<(A::State, Option<Letter>), BigUint> = HashMap::new();
    layer.insert((start, None), BigUint::one());
    for n in 1..=nmax {
        let mut next: HashMap<(A::State, Option<Letter>), BigUint> = HashMap::with_capacity(layer.len() * 2);
        for ((state, last), ways) in &layer {
            for l in Letter::alphabet(aut.rank()) {
                if *last == Some(l.inverse()) {
                    continue;
                }
                let Some(s) = aut.step(state, l) else { continue };
                if !aut.may_accept_within(&s, nmax - n) {
                    continue;
                }
                *next.entry((s, Some(l))).or_default() += ways;
            }
        }
        counts[n] = next
            .iter()
            .filter(|((s, _), _)| aut.accepts(s))
            .fold(BigUint::zero(), |acc, (_, c)| acc + c);
        layer = next;
    }
    counts
}

/// All accepted reduced words of length at most `rmax`, in shortlex order.
pub fn enumerate_accepted<A: WordAutomaton>(aut: &A, rmax: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(rmax);
    let start = aut.start();
    if aut.may_accept_within(&start, rmax) {
        dfs(aut, &start, rmax, &mut cur, &mut out);
    }
    out.sort_by(|a, b| a.shortlex_cmp(b));
    out
}

fn dfs<A: WordAutomaton>(aut: &A, state: &A::State, rmax: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if aut.accepts(state) {
        out.push(Word::from_reduced_unchecked(cur.clone()));
    }
    if cur.len() == rmax {
        return;
    }
    for l in Letter::alphabet(aut.rank()) {
        if cur.last() == Some(&l.inverse()) {
            continue;
        }
        let Some(s) = aut.step(state, l) else { continue };
        if !aut.may_accept_within(&s, rmax - cur.len() - 1) {
            continue;
        }
        cur.push(l);
        dfs(aut, &s, rmax, cur, out);
        cur.pop();
    }
}

/// Runs two automata in lockstep; accepts when both accept.
pub struct Product<'a, A, B> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<A: WordAutomaton, B: WordAutomaton> WordAutomaton for Product<'_, A, B> {
    type State = (A::State, B::State);

    fn rank(&self) -> usize {
        self.left.rank()
    }

    fn start(&self) -> Self::State {
        (self.left.start(), self.right.start())
    }

    fn step(&self, s: &Self::State, l: Letter) -> Option<Self::State> {
        Some((self.left.step(&s.0, l)?, self.right.step(&s.1, l)?))
    }

    fn accepts(&self, s: &Self::State) -> bool {
        self.left.accepts(&s.0) && self.right.accepts(&s.1)
    }

    fn may_accept_within(&self, s: &Self::State, steps: usize) -> bool {
        self.left.may_accept_within(&s.0, steps) && self.right.may_accept_within(&s.1, steps)
    }
}

/// Accepts every word of the free group.
pub struct AllWords {
    pub rank: usize,
}

impl WordAutomaton for AllWords {
    type State = ();

    fn rank(&self) -> usize {
        self.rank
    }

    fn start(&self) {}

    fn step(&self, _: &(), _: Letter) -> Option<()> {
        Some(())
    }

    fn accepts(&self, _: &()) -> bool {
        true
    }
}
