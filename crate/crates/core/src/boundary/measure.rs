//! Orbit measures, boundary cylinder measures, conformal densities on the tree,
//! the shadow-lemma ratios and the Poincaré quasi-cocycle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::cylinder::{extensions, shadow, successors};
use crate::error::{invalid, Error, Result};
use crate::space::{Letter, Word};
use crate::subgroups::{SubgroupHandle, SubgroupKey};

/// Truncated, normalized `sum over g in H, |g| <= R of exp(-s|g|) delta_g`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitMeasure {
    pub rank: usize,
    pub exponent: f64,
    pub radius: usize,
    pub atoms: Vec<(Word, f64)>,
    pub total_mass: f64,
    /// Only the identity lies in the ball, so the measure is a point mass.
    pub degenerate: bool,
}

impl OrbitMeasure {
    /// Mass of the atoms whose words start with `stem`.
    pub fn mass_with_prefix(&self, stem: &Word) -> f64 {
        self.atoms.iter().filter(|(g, _)| stem.is_prefix_of(g)).map(|(_, m)| m).sum()
    }
}

pub fn ws_measure(h: &SubgroupHandle, s: f64, radius: usize) -> Result<OrbitMeasure> {
    if !s.is_finite() || s < 0.0 {
        return invalid(format!("exponent must be finite and nonnegative, got {s}"));
    }
    let elements = h.elements_in_ball(radius);
    let weights: Vec<f64> = elements.iter().map(|g| (-s * g.len() as f64).exp()).collect();
    let z: f64 = weights.iter().sum();
    let atoms: Vec<(Word, f64)> = elements.into_iter().zip(weights).map(|(g, w)| (g, w / z)).collect();
    let total_mass = atoms.iter().map(|(_, m)| m).sum();
    Ok(OrbitMeasure { rank: h.rank(), exponent: s, radius, degenerate: atoms.len() == 1, atoms, total_mass })
}

/// `nu_o(Cyl(w))` for the uniform measure on the boundary; 1 for the empty stem.
pub fn uniform_mass(rank: usize, w: &Word) -> BigRational {
    if w.is_empty() {
        return BigRational::one();
    }
    let q = BigInt::from(2 * rank - 1);
    BigRational::new(BigInt::one(), BigInt::from(2 * rank) * num_traits::pow(q, w.len() - 1))
}

fn uniform_mass_f64(rank: usize, w: &Word) -> f64 {
    if w.is_empty() {
        return 1.0;
    }
    1.0 / (2.0 * rank as f64 * ((2 * rank - 1) as f64).powi(w.len() as i32 - 1))
}

/// Masses of every cylinder of length `1..=depth`, additive by construction.
/// Cylinders deeper than the table split their depth-`depth` ancestor in
/// proportion to the uniform measure.
#[derive(Debug, Clone)]
pub struct CylinderMeasure {
    rank: usize,
    depth: usize,
    masses: BTreeMap<Word, f64>,
    exact: Option<BTreeMap<Word, BigRational>>,
    distortion: f64,
}

impl CylinderMeasure {
    fn from_leaves(rank: usize, depth: usize, leaves: BTreeMap<Word, f64>) -> Self {
        let mut masses = leaves;
        for len in (1..depth).rev() {
            let level: Vec<(Word, f64)> = masses
                .iter()
                .filter(|(w, _)| w.len() == len + 1)
                .map(|(w, m)| (w.prefix(len), *m))
                .collect();
            for (p, m) in level {
                *masses.entry(p).or_default() += m;
            }
        }
        CylinderMeasure { rank, depth, masses, exact: None, distortion: 1.0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn distortion(&self) -> f64 {
        self.distortion
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn mass(&self, stem: &Word) -> f64 {
        if stem.is_empty() {
            return self.total_mass();
        }
        if stem.len() <= self.depth {
            return self.masses.get(stem).copied().unwrap_or(0.0);
        }
        let q = (2 * self.rank - 1) as f64;
        self.masses.get(&stem.prefix(self.depth)).copied().unwrap_or(0.0) * q.powi(-((stem.len() - self.depth) as i32))
    }

    pub fn exact_mass(&self, stem: &Word) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        if stem.is_empty() {
            return Some(Letter::alphabet(self.rank).map(|l| exact[&Word::from(l)].clone()).sum());
        }
        if stem.len() <= self.depth {
            return Some(exact.get(stem).cloned().unwrap_or_else(BigRational::zero));
        }
        let ancestor = exact.get(&stem.prefix(self.depth)).cloned().unwrap_or_else(BigRational::zero);
        let q = BigInt::from(2 * self.rank - 1);
        Some(ancestor / BigRational::from_integer(num_traits::pow(q, stem.len() - self.depth)))
    }

    pub fn total_mass(&self) -> f64 {
        Letter::alphabet(self.rank).map(|l| self.masses.get(&Word::from(l)).copied().unwrap_or(0.0)).sum()
    }

    /// Stems of length `1..=depth` in shortlex order.
    pub fn stems(&self) -> Vec<Word> {
        let mut stems: Vec<Word> = self.masses.keys().cloned().collect();
        stems.sort_by(|a, b| a.shortlex_cmp(b));
        stems
    }

    /// Largest `|mass(w) - sum of children|` over interior stems.
    pub fn additivity_defect(&self) -> f64 {
        self.masses
            .iter()
            .filter(|(w, _)| w.len() < self.depth)
            .map(|(w, m)| (m - successors(self.rank, w).map(|l| self.mass(&w.push(l))).sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }
}

impl Serialize for CylinderMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Masses<'a>(&'a CylinderMeasure);
        impl Serialize for Masses<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let m = self.0;
                let stems = m.stems();
                let mut map = s.serialize_map(Some(stems.len()))?;
                for w in &stems {
                    match m.exact_mass(w) {
                        Some(r) => map.serialize_entry(&w.to_string(), &r.to_string())?,
                        None => map.serialize_entry(&w.to_string(), &m.mass(w))?,
                    }
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("rank", &self.rank)?;
        map.serialize_entry("depth", &self.depth)?;
        map.serialize_entry("totalMass", &self.total_mass())?;
        map.serialize_entry("distortion", &self.distortion)?;
        map.serialize_entry("masses", &Masses(self))?;
        map.end()
    }
}

/// Pushes an orbit measure to the boundary: atoms at least `depth` long land
/// on their depth-`depth` prefix, shorter atoms spread over their cylinder
/// (everything, for the identity) in proportion to the uniform measure.
pub fn boundary_project(m: &OrbitMeasure, depth: usize) -> Result<CylinderMeasure> {
    if depth == 0 {
        return invalid("projection depth must be at least 1");
    }
    let rank = m.rank;
    let q = (2 * rank - 1) as f64;
    let mut pending: BTreeMap<Word, f64> = BTreeMap::new();
    let mut leaves: BTreeMap<Word, f64> = BTreeMap::new();
    for (g, w) in &m.atoms {
        if g.len() >= depth {
            *leaves.entry(g.prefix(depth)).or_default() += w;
        } else {
            *pending.entry(g.clone()).or_default() += w;
        }
    }
    // Spread interior mass downwards one level at a time.
    for len in 0..depth {
        let level: Vec<(Word, f64)> = pending.iter().filter(|(w, _)| w.len() == len).map(|(w, m)| (w.clone(), *m)).collect();
        let branches = if len == 0 { 2.0 * rank as f64 } else { q };
        for (w, mass) in level {
            for l in successors(rank, &w) {
                let child = w.push(l);
                if child.len() == depth {
                    *leaves.entry(child).or_default() += mass / branches;
                } else {
                    *pending.entry(child).or_default() += mass / branches;
                }
            }
        }
    }
    Ok(CylinderMeasure::from_leaves(rank, depth, leaves))
}

/// `(2k-1)^e` as a rational, for any integer `e`.
fn q_power(rank: usize, e: i64) -> BigRational {
    let q = BigInt::from(2 * rank - 1);
    let p = BigRational::from_integer(num_traits::pow(q, e.unsigned_abs() as usize));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// The conformal density of dimension `ln(2k-1)` for `F_k`, seen from `x`,
/// tabulated exactly on every cylinder to `depth`.
pub fn exact_conformal_density(rank: usize, x: &Word, depth: usize) -> Result<CylinderMeasure> {
    if rank < 2 {
        return invalid(format!("rank must be at least 2, got {rank}"));
    }
    if depth == 0 || !x.fits_rank(rank) {
        return invalid("need depth >= 1 and a point of the right rank");
    }
    let family = DensityFamily::ExactFull { rank };
    let mut exact = BTreeMap::new();
    let mut masses = BTreeMap::new();
    for len in 1..=depth {
        for w in extensions(rank, &Word::identity(), len) {
            let r = family.exact_mass_at(x, &w).expect("exact family");
            masses.insert(w.clone(), r.to_f64().unwrap_or(f64::NAN));
            exact.insert(w, r);
        }
    }
    Ok(CylinderMeasure { rank, depth, masses, exact: Some(exact), distortion: 1.0 })
}

/// A density seen from every point of the tree.
///
/// The exact family is the conformal density of the full group. A projected
/// family takes a measure at `o` and moves it to `x` with the conformal
/// derivative `exp(dimension * beta_xi(o, x))`.
#[derive(Debug, Clone)]
pub enum DensityFamily {
    ExactFull { rank: usize },
    Projected { base: CylinderMeasure, dimension: f64 },
}

impl DensityFamily {
    pub fn rank(&self) -> usize {
        match self {
            DensityFamily::ExactFull { rank } => *rank,
            DensityFamily::Projected { base, .. } => base.rank(),
        }
    }

    pub fn dimension(&self) -> f64 {
        match self {
            DensityFamily::ExactFull { rank } => ((2 * rank - 1) as f64).ln(),
            DensityFamily::Projected { dimension, .. } => *dimension,
        }
    }

    pub fn distortion(&self) -> f64 {
        match self {
            DensityFamily::ExactFull { .. } => 1.0,
            DensityFamily::Projected { base, .. } => base.distortion(),
        }
    }

    fn base_mass(&self, w: &Word) -> f64 {
        match self {
            DensityFamily::ExactFull { rank } => uniform_mass_f64(*rank, w),
            DensityFamily::Projected { base, .. } => base.mass(w),
        }
    }

    /// Mass of `Cyl(stem)` (everything, for the empty stem) seen from `x`.
    ///
    /// Ends in `Cyl(stem)` that leave `x` after `j` common letters all carry the
    /// derivative `exp(dim (2j - |x|))`; there is one such band per `j` when the
    /// stem is a prefix of `x`, and a single band otherwise.
    pub fn mass_at(&self, x: &Word, stem: &Word) -> f64 {
        let dim = self.dimension();
        let n = x.len() as f64;
        if !stem.is_prefix_of(x) {
            let j = stem.common_prefix_len(x) as f64;
            return self.base_mass(stem) * (dim * (2.0 * j - n)).exp();
        }
        let mut total = 0.0;
        for j in stem.len()..=x.len() {
            let here = self.base_mass(&x.prefix(j));
            let deeper = if j < x.len() { self.base_mass(&x.prefix(j + 1)) } else { 0.0 };
            total += (here - deeper) * (dim * (2.0 * j as f64 - n)).exp();
        }
        total
    }

    pub fn total_mass_at(&self, x: &Word) -> f64 {
        self.mass_at(x, &Word::identity())
    }

    /// Exact rational masses, for the exact family only.
    pub fn exact_mass_at(&self, x: &Word, stem: &Word) -> Option<BigRational> {
        let DensityFamily::ExactFull { rank } = self else { return None };
        let rank = *rank;
        let n = x.len() as i64;
        if !stem.is_prefix_of(x) {
            let j = stem.common_prefix_len(x) as i64;
            return Some(uniform_mass(rank, stem) * q_power(rank, 2 * j - n));
        }
        let mut total = BigRational::zero();
        for j in stem.len()..=x.len() {
            let here = uniform_mass(rank, &x.prefix(j));
            let deeper = if j < x.len() { uniform_mass(rank, &x.prefix(j + 1)) } else { BigRational::zero() };
            total += (here - deeper) * q_power(rank, 2 * j as i64 - n);
        }
        Some(total)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShadowRatioRow {
    pub element: Word,
    pub shadow_mass: f64,
    pub ratio: f64,
    pub cocycle: f64,
    pub ratio_over_cocycle: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShadowLemmaReport {
    pub exponent: f64,
    pub shadow_radius: usize,
    pub max_radius: usize,
    pub rows: Vec<ShadowRatioRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub spread: f64,
    pub min_ratio_over_cocycle: f64,
    pub max_ratio_over_cocycle: f64,
}

/// `nu_o(S_R(o, g^-1 o)) exp(delta |g|)` over `g in H`, `0 < |g| <= rmax`, also
/// divided by the cocycle value `||nu_{g^-1 o}||`.
pub fn shadow_lemma_check(
    h: &SubgroupHandle,
    density: &DensityFamily,
    exponent: f64,
    shadow_radius: usize,
    rmax: usize,
) -> Result<ShadowLemmaReport> {
    if !(exponent > 0.0) {
        return invalid(format!("exponent must be positive, got {exponent}"));
    }
    if density.rank() != h.rank() {
        return invalid("density and subgroup have different ranks");
    }
    let o = Word::identity();
    let mut rows = Vec::new();
    for g in h.elements_in_ball(rmax).into_iter().filter(|g| !g.is_empty()) {
        let ginv = g.inverse();
        let sh = shadow(h.rank(), &o, &ginv, shadow_radius)?;
        let shadow_mass: f64 = sh.cylinders.stems().iter().map(|w| density.mass_at(&o, w)).sum();
        let ratio = shadow_mass * (exponent * g.len() as f64).exp();
        let cocycle = density.total_mass_at(&ginv);
        rows.push(ShadowRatioRow { element: g, shadow_mass, ratio, cocycle, ratio_over_cocycle: ratio / cocycle });
    }
    if rows.is_empty() {
        return Err(Error::NotFound(format!("no nontrivial element of H within radius {rmax}")));
    }
    let fold = |f: fn(&ShadowRatioRow) -> f64| {
        rows.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (min_ratio, max_ratio) = fold(|r| r.ratio);
    let (min_rc, max_rc) = fold(|r| r.ratio_over_cocycle);
    Ok(ShadowLemmaReport {
        exponent,
        shadow_radius,
        max_radius: rmax,
        rows,
        min_ratio,
        max_ratio,
        spread: max_ratio / min_ratio,
        min_ratio_over_cocycle: min_rc,
        max_ratio_over_cocycle: max_rc,
    })
}

/// Exact `nu_o(S_R(o, g^-1 o)) (2k-1)^{|g|}` for the full group's conformal
/// density, over `0 < |g| <= rmax` in shortlex order.
pub fn exact_shadow_ratios(rank: usize, shadow_radius: usize, rmax: usize) -> Result<Vec<(Word, BigRational)>> {
    let family = DensityFamily::ExactFull { rank };
    let o = Word::identity();
    let mut out = Vec::new();
    for g in crate::space::TreeModel::new(rank)?.ball(rmax).into_iter().filter(|g| !g.is_empty()) {
        let sh = shadow(rank, &o, &g.inverse(), shadow_radius)?;
        let mass: BigRational = sh.cylinders.stems().iter().map(|w| family.exact_mass_at(&o, w).expect("exact family")).sum();
        let ratio = mass * q_power(rank, g.len() as i64);
        out.push((g, ratio));
    }
    Ok(out)
}

/// Densities for a subgroup and some of its conjugates, looked up by subgroup.
#[derive(Debug, Clone, Default)]
pub struct DensityAtlas {
    entries: BTreeMap<SubgroupKey, (String, DensityFamily)>,
}

impl DensityAtlas {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, h: &SubgroupHandle, label: impl Into<String>, density: DensityFamily) {
        self.entries.insert(h.key(), (label.into(), density));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, h: &SubgroupHandle) -> Option<&DensityFamily> {
        self.entries.get(&h.key()).map(|(_, d)| d)
    }

    /// `pi(g, H) = ||nu^H_{g^-1 o}||`.
    pub fn cocycle(&self, g: &Word, h: &SubgroupHandle) -> Result<f64> {
        let d = self.get(h).ok_or_else(|| Error::NotFound(format!("no density for the subgroup {}", describe(h))))?;
        Ok(d.total_mass_at(&g.inverse()))
    }

    /// `|ln pi(gk, H) - ln pi(g, k H k^-1) - ln pi(k, H)|`.
    pub fn cocycle_residual(&self, g: &Word, k: &Word, h: &SubgroupHandle) -> Result<f64> {
        let conj = h.conjugate(k)?;
        let d = self.get(&conj).ok_or_else(|| {
            Error::NotFound(format!("no density for the conjugate of {} by {k}", describe(h)))
        })?;
        let lhs = self.cocycle(&g.mul(k), h)?.ln();
        let mid = d.total_mass_at(&g.inverse()).ln();
        Ok((lhs - mid - self.cocycle(k, h)?.ln()).abs())
    }
}

fn describe(h: &SubgroupHandle) -> String {
    match h.generators() {
        Some(g) if g.len() <= 6 => format!("<{}>", g.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")),
        _ => h.variant_name().to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CocycleReport {
    pub radius: usize,
    pub pairs: usize,
    pub max_residual: f64,
    pub worst_pair: Option<(Word, Word)>,
    pub min_cocycle: f64,
    pub max_cocycle: f64,
    /// Smallest `d` with every residual at most `12 ln d`.
    pub implied_distortion: f64,
}

/// Residuals over all pairs `g, k` of length at most `radius`, with `k` in `H`'s ambient group.
pub fn cocycle_residuals(atlas: &DensityAtlas, h: &SubgroupHandle, radius: usize) -> Result<CocycleReport> {
    let ball = crate::space::TreeModel::new(h.rank())?.ball(radius);
    let mut max_residual: f64 = 0.0;
    let mut worst = None;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut pairs = 0;
    for k in &ball {
        let conj = h.conjugate(k)?;
        let conj_density = atlas.get(&conj).ok_or_else(|| {
            Error::NotFound(format!("no density for the conjugate of {} by {k}", describe(h)))
        })?;
        let pk = atlas.cocycle(k, h)?;
        for g in &ball {
            let pgk = atlas.cocycle(&g.mul(k), h)?;
            let pg = conj_density.total_mass_at(&g.inverse());
            lo = lo.min(pgk);
            hi = hi.max(pgk);
            let r = (pgk.ln() - pg.ln() - pk.ln()).abs();
            if r > max_residual {
                max_residual = r;
                worst = Some((g.clone(), k.clone()));
            }
            pairs += 1;
        }
    }
    Ok(CocycleReport {
        radius,
        pairs,
        max_residual,
        worst_pair: worst,
        min_cocycle: lo,
        max_cocycle: hi,
        implied_distortion: (max_residual / 12.0).exp(),
    })
}

/// Offsets above the exponent estimate at which orbit measures are evaluated.
pub const EPSILON_LADDER: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LadderRung {
    pub epsilon: f64,
    pub exponent: f64,
    pub degenerate: bool,
    /// Masses of the depth-1 cylinders in generator order `a, A, b, B, ...`.
    pub first_level: Vec<f64>,
    pub measure: CylinderMeasure,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LadderReport {
    pub exponent_estimate: f64,
    pub radius: usize,
    pub depth: usize,
    pub rungs: Vec<LadderRung>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Projected orbit measures at `delta + eps` for each rung of [`EPSILON_LADDER`].
pub fn ws_ladder(h: &SubgroupHandle, delta: f64, radius: usize, depth: usize) -> Result<LadderReport> {
    let mut rungs = Vec::new();
    for eps in EPSILON_LADDER {
        let s = delta + eps;
        let m = ws_measure(h, s, radius)?;
        let measure = boundary_project(&m, depth)?;
        let first_level = Letter::alphabet(h.rank()).map(|l| measure.mass(&Word::from(l))).collect();
        rungs.push(LadderRung { epsilon: eps, exponent: s, degenerate: m.degenerate, first_level, measure });
    }
    Ok(LadderReport {
        exponent_estimate: delta,
        radius,
        depth,
        rungs,
        note: h.index().is_none().then(|| "uncontrolled approximation".to_string()),
    })
}
