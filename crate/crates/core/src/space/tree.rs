//! The Cayley tree of the free group `F_k` with its boundary of infinite
//! reduced words.
//!
//! Every quantity here is exact: distances, Gromov products and Busemann
//! functions are integers. Boundary points are eventually periodic words
//! `prefix . tail^inf`, which are dense in the boundary.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{Letter, Word, MAX_RANK};
use crate::error::{invalid, Result};

/// The free group of rank `k >= 2` acting on its Cayley tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeModel {
    rank: usize,
}

impl TreeModel {
    pub fn new(rank: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&rank) {
            return invalid(format!("rank must lie in 2..={MAX_RANK}, got {rank}"));
        }
        Ok(TreeModel { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Valence minus one, `2k - 1`: the branching of every non-root vertex.
    pub fn branching(&self) -> usize {
        2 * self.rank - 1
    }

    /// Hausdorff dimension of the boundary in the visual metric with parameter `e`,
    /// which is also the critical exponent of the full group.
    pub fn boundary_dimension(&self) -> f64 {
        (self.branching() as f64).ln()
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.fits_rank(self.rank)
    }

    pub fn dist(&self, x: &Word, y: &Word) -> usize {
        tree_dist(x, y)
    }

    /// Number of reduced words of length `n`.
    pub fn sphere_size(&self, n: usize) -> u128 {
        if n == 0 {
            1
        } else {
            2 * self.rank as u128 * (self.branching() as u128).pow(n as u32 - 1)
        }
    }

    /// All reduced words of length exactly `n`, in lexicographic order of letter codes.
    pub fn sphere(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        extend_words(self.rank, n, &mut cur, &mut out);
        out
    }

    /// All reduced words of length at most `r`, grouped by length.
    pub fn ball(&self, r: usize) -> Vec<Word> {
        (0..=r).flat_map(|n| self.sphere(n)).collect()
    }
}

fn extend_words(rank: usize, n: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if cur.len() == n {
        out.push(Word::from_reduced_unchecked(cur.clone()));
        return;
    }
    for l in Letter::alphabet(rank) {
        if cur.last() == Some(&l.inverse()) {
            continue;
        }
        cur.push(l);
        extend_words(rank, n, cur, out);
        cur.pop();
    }
}

/// Word-metric distance `|x^-1 y|`.
pub fn tree_dist(x: &Word, y: &Word) -> usize {
    let c = x.common_prefix_len(y);
    x.len() + y.len() - 2 * c
}

/// Gromov product `(x|y)_o`, which on the tree is the length of the common
/// prefix of `o^-1 x` and `o^-1 y`.
pub fn tree_gromov_product(x: &Word, y: &Word, o: &Word) -> usize {
    let xo = o.inverse().mul(x);
    let yo = o.inverse().mul(y);
    xo.common_prefix_len(&yo)
}

/// An end of the tree: the infinite reduced word `prefix . tail . tail . ...`.
///
/// Stored in a canonical form (primitive tail, shortest prefix), so two ends
/// are equal exactly when their representations are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEnd {
    prefix: Word,
    tail: Word,
}

impl TreeEnd {
    pub fn new(prefix: Word, tail: Word) -> Result<Self> {
        if tail.is_empty() {
            return invalid("an end needs a nonempty periodic tail");
        }
        if !tail.is_cyclically_reduced() {
            return invalid(format!("tail {tail} is not cyclically reduced"));
        }
        if let (Some(p), Some(t)) = (prefix.last(), tail.first()) {
            if p == t.inverse() {
                return invalid(format!("{prefix}.({tail})^inf is not reduced"));
            }
        }
        Ok(Self::canonical(prefix, tail))
    }

    /// Parses `"prefix(tail)"`, e.g. `"a(b)"` for `a b b b ...` or `"(ab)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (Some(open), true) = (s.find('('), s.ends_with(')')) else {
            return invalid(format!("end {s:?} must look like prefix(tail)"));
        };
        let prefix = if open == 0 { Word::identity() } else { Word::parse(&s[..open])? };
        let tail = Word::parse(&s[open + 1..s.len() - 1])?;
        TreeEnd::new(prefix, tail)
    }

    /// `w^inf` for a cyclically reduced nonempty `w`.
    pub fn periodic(tail: Word) -> Result<Self> {
        TreeEnd::new(Word::identity(), tail)
    }

    fn canonical(prefix: Word, tail: Word) -> Self {
        let (mut tail, _) = tail.primitive_root();
        let mut prefix = prefix;
        // Absorb trailing prefix letters into the period.
        while let (Some(p), Some(t)) = (prefix.last(), tail.last()) {
            if p != t {
                break;
            }
            prefix = prefix.prefix(prefix.len() - 1);
            tail = tail.rotate_left(tail.len() - 1);
        }
        TreeEnd { prefix, tail }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn tail(&self) -> &Word {
        &self.tail
    }

    /// Letter at position `i` (0-based) of the infinite word.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix.letters()[i]
        } else {
            let t = self.tail.letters();
            t[(i - self.prefix.len()) % t.len()]
        }
    }

    /// The first `n` letters.
    pub fn truncate(&self, n: usize) -> Word {
        Word::from_reduced_unchecked((0..n).map(|i| self.letter(i)).collect())
    }

    /// Length of the common prefix of two ends, `None` when they coincide.
    pub fn gromov_product(&self, other: &TreeEnd) -> Option<usize> {
        if self == other {
            return None;
        }
        // Two eventually periodic sequences agreeing this long are equal.
        let bound = self.prefix.len().max(other.prefix.len()) + self.tail.len() + other.tail.len();
        (0..bound).find(|&i| self.letter(i) != other.letter(i))
    }

    /// Common prefix length of the end with a vertex word.
    pub fn gromov_product_with(&self, x: &Word) -> usize {
        x.letters()
            .iter()
            .enumerate()
            .take_while(|(i, l)| self.letter(*i) == **l)
            .count()
    }

    pub fn starts_with(&self, stem: &Word) -> bool {
        self.gromov_product_with(stem) == stem.len()
    }

    /// Image of the end under left multiplication by `g`.
    pub fn translate(&self, g: &Word) -> TreeEnd {
        let mut head = g.mul(&self.prefix);
        let mut tail = self.tail.clone();
        // Cancellation can run into the periodic part, at most |g| letters deep.
        while let (Some(h), Some(t)) = (head.last(), tail.first()) {
            if h != t.inverse() {
                break;
            }
            head = head.prefix(head.len() - 1);
            tail = tail.rotate_left(1);
        }
        TreeEnd::canonical(head, tail)
    }

    /// Visual distance `a^{-(xi|eta)_o}` from the basepoint; zero when equal.
    pub fn visual_distance(&self, other: &TreeEnd, a: f64) -> f64 {
        match self.gromov_product(other) {
            None => 0.0,
            Some(n) => a.powi(-(n as i32)),
        }
    }

    /// Busemann function `beta_xi(x, y) = lim d(x,z) - d(y,z)` as `z -> xi`.
    pub fn busemann(&self, x: &Word, y: &Word) -> i64 {
        let gx = self.gromov_product_with(x) as i64;
        let gy = self.gromov_product_with(y) as i64;
        x.len() as i64 - y.len() as i64 - 2 * gx + 2 * gy
    }
}

impl fmt::Display for TreeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}", self.prefix)?;
        }
        write!(f, "({})", self.tail)
    }
}

impl Serialize for TreeEnd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TreeEnd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TreeEnd::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Axis data of a nontrivial element `h = u c u^-1`: repelling and attracting
/// ends `(u c^-inf, u c^inf)` and translation length `|c|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAxis {
    pub repelling: TreeEnd,
    pub attracting: TreeEnd,
    pub translation_length: usize,
    /// Distance from the basepoint to the axis, which is `|u|`.
    pub distance_from_basepoint: usize,
}

pub fn tree_axis(h: &Word) -> Result<TreeAxis> {
    if h.is_empty() {
        return invalid("the identity has no axis");
    }
    let (u, c) = h.cyclic_decomposition();
    Ok(TreeAxis {
        repelling: TreeEnd::canonical(u.clone(), c.inverse()),
        attracting: TreeEnd::canonical(u.clone(), c.clone()),
        translation_length: c.len(),
        distance_from_basepoint: u.len(),
    })
}
