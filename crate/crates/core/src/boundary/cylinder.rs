//! Finite unions of cylinders in the boundary of the Cayley tree, and shadows.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::space::{tree_dist, Letter, TreeEnd, Word};

/// The letters that may follow `w` in a reduced word.
pub fn successors(rank: usize, w: &Word) -> impl Iterator<Item = Letter> + '_ {
    let last = w.last();
    Letter::alphabet(rank).filter(move |l| Some(l.inverse()) != last)
}

/// All reduced extensions of `w` of length exactly `depth` (just `w` if it is already that long).
pub fn extensions(rank: usize, w: &Word, depth: usize) -> Vec<Word> {
    let mut layer = vec![w.clone()];
    for _ in w.len()..depth {
        layer = layer.iter().flat_map(|u| successors(rank, u).map(move |l| u.push(l))).collect();
    }
    layer
}

/// A finite union of cylinders `Cyl(w)`, kept canonical: no stem is a prefix of
/// another, complete sibling families below depth 1 are merged into their
/// parent, and the whole boundary is the `2k` cylinders of depth 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    rank: usize,
    stems: Vec<Word>,
}

impl Serialize for CylinderSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.stems.iter().map(|w| w.to_string()))
    }
}

impl CylinderSet {
    pub fn empty(rank: usize) -> Self {
        CylinderSet { rank, stems: Vec::new() }
    }

    pub fn full(rank: usize) -> Self {
        CylinderSet::from_stems(rank, Letter::alphabet(rank).map(Word::from).collect()).expect("depth-1 stems are valid")
    }

    /// A single cylinder; the empty stem stands for the whole boundary.
    pub fn cylinder(rank: usize, stem: &Word) -> Result<Self> {
        if stem.is_empty() {
            return Ok(CylinderSet::full(rank));
        }
        CylinderSet::from_stems(rank, vec![stem.clone()])
    }

    pub fn from_stems(rank: usize, stems: Vec<Word>) -> Result<Self> {
        if let Some(w) = stems.iter().find(|w| !w.fits_rank(rank)) {
            return invalid(format!("stem {w} does not fit rank {rank}"));
        }
        let mut stems: Vec<Word> = stems.into_iter().flat_map(|w| if w.is_empty() { Letter::alphabet(rank).map(Word::from).collect() } else { vec![w] }).collect();
        stems.sort_by(|a, b| a.shortlex_cmp(b));
        stems.dedup();
        Ok(CylinderSet { rank, stems }.canonical())
    }

    fn canonical(self) -> Self {
        let rank = self.rank;
        // Drop stems covered by a shorter stem.
        let mut kept: BTreeSet<Word> = BTreeSet::new();
        for w in self.stems {
            if !(1..=w.len()).any(|n| kept.contains(&w.prefix(n))) {
                kept.insert(w);
            }
        }
        // Merge complete sibling families, deepest first.
        loop {
            let deepest = kept.iter().map(|w| w.len()).max().unwrap_or(0);
            let mut merged = false;
            for depth in (2..=deepest).rev() {
                let parents: BTreeSet<Word> = kept.iter().filter(|w| w.len() == depth).map(|w| w.prefix(depth - 1)).collect();
                for p in parents {
                    let children: Vec<Word> = successors(rank, &p).map(|l| p.push(l)).collect();
                    if children.iter().all(|c| kept.contains(c)) {
                        for c in &children {
                            kept.remove(c);
                        }
                        kept.insert(p);
                        merged = true;
                    }
                }
                if merged {
                    break;
                }
            }
            if !merged {
                break;
            }
        }
        let mut stems: Vec<Word> = kept.into_iter().collect();
        stems.sort_by(|a, b| a.shortlex_cmp(b));
        CylinderSet { rank, stems }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn stems(&self) -> &[Word] {
        &self.stems
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.stems.len() == 2 * self.rank && self.stems.iter().all(|w| w.len() == 1)
    }

    pub fn max_depth(&self) -> usize {
        self.stems.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn contains_end(&self, xi: &TreeEnd) -> bool {
        self.stems.iter().any(|w| xi.starts_with(w))
    }

    /// Whether the cylinder `Cyl(w)` lies inside the set.
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        if w.is_empty() {
            return self.is_full();
        }
        self.stems.iter().any(|s| s.is_prefix_of(w))
            || (w.len() < self.max_depth() && successors(self.rank, w).all(|l| self.contains_cylinder(&w.push(l))))
    }

    /// The stems of length exactly `depth` whose cylinders make up the set; `depth >= max_depth`.
    pub fn refine_to(&self, depth: usize) -> Vec<Word> {
        let mut out: Vec<Word> = self.stems.iter().flat_map(|w| extensions(self.rank, w, depth.max(w.len()))).collect();
        out.sort_by(|a, b| a.shortlex_cmp(b));
        out
    }

    pub fn union(&self, other: &CylinderSet) -> CylinderSet {
        let stems = self.stems.iter().chain(&other.stems).cloned().collect();
        CylinderSet::from_stems(self.rank, stems).expect("same rank")
    }

    pub fn intersection(&self, other: &CylinderSet) -> CylinderSet {
        let mut stems = Vec::new();
        for a in &self.stems {
            for b in &other.stems {
                if a.is_prefix_of(b) {
                    stems.push(b.clone());
                } else if b.is_prefix_of(a) {
                    stems.push(a.clone());
                }
            }
        }
        CylinderSet::from_stems(self.rank, stems).expect("same rank")
    }

    /// The image `g . A` in cylinders based at the identity.
    pub fn translate(&self, g: &Word) -> CylinderSet {
        // Stems longer than |g| cannot be swallowed by cancellation against g.
        let depth = g.len() + 1;
        let stems = self.stems.iter().flat_map(|w| extensions(self.rank, w, depth.max(w.len()))).map(|w| g.mul(&w)).collect();
        CylinderSet::from_stems(self.rank, stems).expect("same rank")
    }
}

/// The shadow `S_R(x, y)`: ends whose ray from `x` passes within `R` of `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shadow {
    pub source: Word,
    pub target: Word,
    pub radius: usize,
    pub cylinders: CylinderSet,
}

/// Seen from the identity, the ray to an end meets `ball(y, R)` iff the end
/// agrees with `y` on its first `|y| - R` letters; the general shadow is the
/// translate `x . S_R(e, x^-1 y)`.
pub fn shadow(rank: usize, x: &Word, y: &Word, radius: usize) -> Result<Shadow> {
    if !x.fits_rank(rank) || !y.fits_rank(rank) {
        return invalid(format!("points must fit rank {rank}"));
    }
    let rel = x.inverse().mul(y);
    let at_origin = if rel.len() <= radius {
        CylinderSet::full(rank)
    } else {
        CylinderSet::cylinder(rank, &rel.prefix(rel.len() - radius))?
    };
    Ok(Shadow { source: x.clone(), target: y.clone(), radius, cylinders: at_origin.translate(x) })
}

/// Pointwise test: the distance from `y` to the ray from `x` to `xi` is
/// `d(x, y) - (y | xi)_x`.
pub fn in_shadow(x: &Word, y: &Word, radius: usize, xi: &TreeEnd) -> bool {
    let rel_end = xi.translate(&x.inverse());
    let rel_y = x.inverse().mul(y);
    tree_dist(x, y) - rel_end.gromov_product_with(&rel_y) <= radius
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(shadow(2, &Word::identity(), &w("ab"), 0).unwrap().cylinders.stems(), &[w("ab")]);
        assert_eq!(shadow(2, &Word::identity(), &w("ab"), 1).unwrap().cylinders.stems(), &[w("a")]);
        for r in 0..3 {
            assert!(shadow(2, &Word::identity(), &Word::identity(), r).unwrap().cylinders.is_full());
        }
    }

    #[test]
    fn canonical_form_merges_siblings() {
        let set = CylinderSet::from_stems(2, vec![w("aa"), w("ab"), w("aB")]).unwrap();
        assert_eq!(set.stems(), &[w("a")]);
        let all = CylinderSet::from_stems(2, vec![w("a"), w("A"), w("b"), w("B"), w("ab")]).unwrap();
        assert!(all.is_full());
        let nested = CylinderSet::from_stems(2, vec![w("a"), w("ab")]).unwrap();
        assert_eq!(nested.stems(), &[w("a")]);
        let refined = CylinderSet::from_stems(2, set.refine_to(4)).unwrap();
        assert_eq!(refined, set);
    }

    #[test]
    fn translation_examples() {
        let a = CylinderSet::cylinder(2, &w("a")).unwrap();
        // A . Cyl(a) is everything except Cyl(A).
        let moved = a.translate(&w("A"));
        assert_eq!(moved.stems(), &[w("a"), w("b"), w("B")]);
        assert!(a.translate(&w("b")).stems() == [w("ba")]);
        assert!(CylinderSet::full(2).translate(&w("abA")).is_full());
    }
}
