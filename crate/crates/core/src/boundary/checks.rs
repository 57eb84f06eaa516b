//! Shadow covers and the Busemann bounds on shadows.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use super::cylinder::{extensions, shadow, successors, CylinderSet};
use crate::error::{invalid, Result};
use crate::space::{tree_dist, Letter, TreeEnd, Word};
use crate::subgroups::SubgroupHandle;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShadowCover {
    pub inner_radius: usize,
    pub width: usize,
    pub shadow_radius: usize,
    pub depth: usize,
    pub shadows: usize,
    pub covered: bool,
    pub min_multiplicity: usize,
    pub max_multiplicity: usize,
}

/// Whether the shadows `S_R(o, g)` over `g in H` with `r <= |g| <= r + k`
/// cover the boundary, with exact multiplicities on the cylinders of depth
/// `r + k + R + 1`.
pub fn shadow_cover_check(h: &SubgroupHandle, width: usize, shadow_radius: usize, inner_radius: usize) -> Result<ShadowCover> {
    let rank = h.rank();
    let depth = inner_radius + width + shadow_radius + 1;
    // Every shadow from o is a single cylinder (or everything); count stems.
    let mut stems: HashMap<Word, usize> = HashMap::new();
    let mut shadows = 0;
    for g in h.elements_in_ball(inner_radius + width).into_iter().filter(|g| g.len() >= inner_radius) {
        let stem = if g.len() <= shadow_radius { Word::identity() } else { g.prefix(g.len() - shadow_radius) };
        *stems.entry(stem).or_default() += 1;
        shadows += 1;
    }
    let mut min = usize::MAX;
    let mut max = 0;
    let mut stack: Vec<(Word, usize)> = vec![(Word::identity(), stems.get(&Word::identity()).copied().unwrap_or(0))];
    while let Some((w, count)) = stack.pop() {
        if w.len() == depth {
            min = min.min(count);
            max = max.max(count);
            continue;
        }
        for l in successors(rank, &w) {
            let child = w.push(l);
            let c = count + stems.get(&child).copied().unwrap_or(0);
            stack.push((child, c));
        }
    }
    Ok(ShadowCover {
        inner_radius,
        width,
        shadow_radius,
        depth,
        shadows,
        covered: min >= 1,
        min_multiplicity: min,
        max_multiplicity: max,
    })
}

/// Cover multiplicity of the full group's annulus shadows, which is the same on
/// every deep cylinder: a length `j` contributes its whole sphere when `j <= R`
/// and `(2k-1)^R` elements sharing the stem otherwise.
pub fn full_group_cover_multiplicity(rank: usize, width: usize, shadow_radius: usize, inner_radius: usize) -> usize {
    let q = 2 * rank - 1;
    (inner_radius..=inner_radius + width)
        .map(|j| match j {
            0 => 1,
            j if j <= shadow_radius => 2 * rank * q.pow(j as u32 - 1),
            _ => q.pow(shadow_radius as u32),
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BusemannShadowReport {
    pub source: Word,
    pub target: Word,
    pub radius: usize,
    pub distance: usize,
    pub samples: usize,
    pub min_busemann: Option<i64>,
    pub max_busemann: Option<i64>,
    pub violations: usize,
    /// The sampled ends closest to the lower and upper bounds.
    pub lowest_end: Option<TreeEnd>,
    pub highest_end: Option<TreeEnd>,
}

impl BusemannShadowReport {
    fn new(x: &Word, y: &Word, radius: usize) -> Self {
        BusemannShadowReport {
            source: x.clone(),
            target: y.clone(),
            radius,
            distance: tree_dist(x, y),
            samples: 0,
            min_busemann: None,
            max_busemann: None,
            violations: 0,
            lowest_end: None,
            highest_end: None,
        }
    }

    fn record(&mut self, xi: TreeEnd) {
        let b = xi.busemann(&self.source, &self.target);
        let d = self.distance as i64;
        if b < d - 2 * self.radius as i64 || b > d {
            self.violations += 1;
        }
        self.samples += 1;
        if self.min_busemann.is_none_or(|m| b < m) {
            self.min_busemann = Some(b);
            self.lowest_end = Some(xi.clone());
        }
        if self.max_busemann.is_none_or(|m| b > m) {
            self.max_busemann = Some(b);
            self.highest_end = Some(xi);
        }
    }
}

/// The end `w l l l ...` continuing `w` by its own last letter.
fn straight_end(w: &Word) -> TreeEnd {
    let l = w.last().expect("nonempty stem");
    TreeEnd::new(w.prefix(w.len() - 1), Word::from(l)).expect("reduced")
}

/// Checks `d(x,y) - 2R <= beta_xi(x, y) <= d(x,y)` for every end that extends a
/// shadow stem to `sample_depth` and then runs straight.
pub fn busemann_shadow_bounds_check(rank: usize, x: &Word, y: &Word, radius: usize, sample_depth: usize) -> Result<BusemannShadowReport> {
    if x == y {
        return invalid("the shadow check needs y != x");
    }
    let sh = shadow(rank, x, y, radius)?;
    let mut report = BusemannShadowReport::new(x, y, radius);
    for stem in sh.cylinders.stems() {
        for w in extensions(rank, stem, sample_depth.max(stem.len())) {
            // Every letter continuation of a leaf, so both ends of each branch are seen.
            for l in successors(rank, &w) {
                report.record(straight_end(&w.push(l)));
            }
        }
    }
    Ok(report)
}

/// A uniformly random reduced word of length `n`.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, n: usize) -> Word {
    let mut w = Word::identity();
    while w.len() < n {
        let choices: Vec<Letter> = successors(rank, &w).collect();
        w = w.push(choices[rng.gen_range(0..choices.len())]);
    }
    w
}

/// A random eventually periodic end inside the set: a random stem, a random
/// extension of `extra` letters, then a random cyclically compatible tail.
pub fn random_end_in<R: Rng>(rng: &mut R, set: &CylinderSet, extra: usize) -> Option<TreeEnd> {
    let stems = set.stems();
    if stems.is_empty() {
        return None;
    }
    let rank = set.rank();
    let mut w = stems[rng.gen_range(0..stems.len())].clone();
    for _ in 0..extra {
        let choices: Vec<Letter> = successors(rank, &w).collect();
        w = w.push(choices[rng.gen_range(0..choices.len())]);
    }
    loop {
        let n = rng.gen_range(1..=3);
        let tail = random_word(rng, rank, n);
        if tail.is_cyclically_reduced() && w.last() != tail.first().map(|t| t.inverse()) {
            return Some(TreeEnd::new(w.clone(), tail).expect("reduced"));
        }
    }
}

/// Runs the Busemann bounds on `samples` random triples `(x, y, R)` with a random
/// end in each shadow.
pub fn busemann_shadow_random_check<R: Rng>(rng: &mut R, rank: usize, samples: usize, max_len: usize, max_radius: usize) -> Result<(usize, usize)> {
    let mut violations = 0;
    let mut checked = 0;
    while checked < samples {
        let (nx, ny) = (rng.gen_range(0..=max_len), rng.gen_range(0..=max_len));
        let x = random_word(rng, rank, nx);
        let y = random_word(rng, rank, ny);
        if x == y {
            continue;
        }
        let radius = rng.gen_range(0..=max_radius);
        let sh = shadow(rank, &x, &y, radius)?;
        let extra = rng.gen_range(0..4);
        let Some(xi) = random_end_in(rng, &sh.cylinders, extra) else { continue };
        let mut report = BusemannShadowReport::new(&x, &y, radius);
        report.record(xi);
        violations += report.violations;
        checked += 1;
    }
    Ok((checked, violations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn cover_examples() {
        let f2 = SubgroupHandle::full(2);
        let c = shadow_cover_check(&f2, 0, 0, 3).unwrap();
        assert!(c.covered);
        assert_eq!(c.max_multiplicity, 1);
        let c = shadow_cover_check(&f2, 1, 1, 4).unwrap();
        assert!(c.covered);
        assert_eq!((c.min_multiplicity, c.max_multiplicity), (6, 6));
        for (k, radius, r) in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (1, 2, 1), (2, 2, 3), (1, 1, 4)] {
            let c = shadow_cover_check(&f2, k, radius, r).unwrap();
            let p = full_group_cover_multiplicity(2, k, radius, r);
            assert_eq!((c.min_multiplicity, c.max_multiplicity), (p, p), "k={k} R={radius} r={r}");
        }
    }

    #[test]
    fn busemann_examples() {
        let r0 = busemann_shadow_bounds_check(2, &Word::identity(), &w("ab"), 0, 4).unwrap();
        assert_eq!((r0.min_busemann, r0.max_busemann, r0.violations), (Some(2), Some(2), 0));
        let r1 = busemann_shadow_bounds_check(2, &Word::identity(), &w("ab"), 1, 4).unwrap();
        assert_eq!((r1.min_busemann, r1.max_busemann, r1.violations), (Some(0), Some(2), 0));
        let xi = TreeEnd::parse("aB(a)").unwrap();
        assert_eq!(xi.busemann(&Word::identity(), &w("ab")), 0);
        assert!(busemann_shadow_bounds_check(2, &w("a"), &w("a"), 1, 3).is_err());
    }
}
