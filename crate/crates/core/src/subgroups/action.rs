//! Actions of `F_k` on finite sets, given by one permutation per generator.
//!
//! A word `w = x_1 ... x_n` acts on the left: `w . p = x_1(x_2(... x_n(p)))`.
//! Reading `w` left to right therefore tracks `w^-1 . p`, which is what the
//! automaton in this module does; stabilizers are the same either way.

use serde::{Deserialize, Serialize};

use super::automaton::WordAutomaton;
use crate::error::{invalid, Result};
use crate::space::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct FiniteAction {
    /// `images[g][p]` is the image of `p` under generator `g`.
    images: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl TryFrom<Vec<Vec<usize>>> for FiniteAction {
    type Error = crate::error::Error;
    fn try_from(images: Vec<Vec<usize>>) -> Result<Self> {
        FiniteAction::new(images)
    }
}

impl From<FiniteAction> for Vec<Vec<usize>> {
    fn from(a: FiniteAction) -> Self {
        a.images
    }
}

impl FiniteAction {
    pub fn new(images: Vec<Vec<usize>>) -> Result<Self> {
        if images.is_empty() {
            return invalid("an action needs at least one generator");
        }
        let size = images[0].len();
        if size == 0 {
            return invalid("an action needs at least one point");
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (g, perm) in images.iter().enumerate() {
            if perm.len() != size {
                return invalid(format!("generator {g} permutes {} points, expected {size}", perm.len()));
            }
            let mut inv = vec![usize::MAX; size];
            for (p, &q) in perm.iter().enumerate() {
                if q >= size || inv[q] != usize::MAX {
                    return invalid(format!("generator {g} is not a permutation of 0..{size}"));
                }
                inv[q] = p;
            }
            inverses.push(inv);
        }
        Ok(FiniteAction { images, inverses })
    }

    /// The action of `F_k` on a single point.
    pub fn trivial(rank: usize) -> Self {
        FiniteAction::new(vec![vec![0]; rank]).expect("trivial action is valid")
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn size(&self) -> usize {
        self.images[0].len()
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    /// `l . p`.
    #[inline]
    pub fn act_letter(&self, l: Letter, p: usize) -> usize {
        if l.is_inverse() {
            self.inverses[l.generator()][p]
        } else {
            self.images[l.generator()][p]
        }
    }

    /// `w . p` for the left action.
    pub fn act(&self, w: &Word, p: usize) -> usize {
        w.letters().iter().rev().fold(p, |q, &l| self.act_letter(l, q))
    }

    /// Points reachable from `p`, in breadth-first order over letter codes.
    pub fn orbit(&self, p: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut order = vec![p];
        seen[p] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for l in Letter::alphabet(self.rank()) {
                let r = self.act_letter(l, q);
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
        }
        order
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.size()
    }

    pub fn fits_rank(&self, rank: usize) -> bool {
        self.rank() == rank
    }
}

/// Tracks `w^-1 . p` while reading `w`; accepts when the tracked point lies in `targets`.
pub struct ActionTracker<'a> {
    pub action: &'a FiniteAction,
    pub start: usize,
    pub targets: Vec<bool>,
}

impl<'a> ActionTracker<'a> {
    pub fn new(action: &'a FiniteAction, start: usize, targets: &[usize]) -> Self {
        let mut mask = vec![false; action.size()];
        for &t in targets {
            mask[t] = true;
        }
        ActionTracker { action, start, targets: mask }
    }
}

impl WordAutomaton for ActionTracker<'_> {
    type State = usize;

    fn rank(&self) -> usize {
        self.action.rank()
    }

    fn start(&self) -> usize {
        self.start
    }

    fn step(&self, p: &usize, l: Letter) -> Option<usize> {
        Some(self.action.act_letter(l.inverse(), *p))
    }

    fn accepts(&self, p: &usize) -> bool {
        self.targets[*p]
    }
}
