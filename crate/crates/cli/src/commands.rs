//! One handler per subcommand. Each returns a report holding both renderings.

use std::path::PathBuf;

use clap::Args;
use hypercrit::boundary::{
    boundary_project, busemann_shadow_bounds_check, cocycle_residuals, exact_shadow_ratios, shadow, shadow_cover_check,
    shadow_lemma_check, ws_ladder, ws_measure, DensityAtlas, DensityFamily,
};
use hypercrit::corpus;
use hypercrit::irs::{
    divergence_pipeline, expected_critical_exponent, irs_from_finite_index, irs_from_normal, recurrence_counts,
    summed_cocycle_check, theorem_one_check, FiniteIrs, Verdict,
};
use hypercrit::series::{
    conjugation_series, critical_exponent_estimate, diagnose, fmt12, half_exponent_check, lambda0_from_delta,
    partial_poincare_over_action, poincare_partial, shortest_element_bound,
};
use hypercrit::space::Word;
use hypercrit::subgroups::{FiniteAction, SubgroupDescription, SubgroupHandle};
use hypercrit::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::output::{csv_row, Format, Outcome, Report};

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Rank k of the free group F_k. Must match the subgroup file when both are given [default: 2].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=8))]
    pub rank: Option<u64>,

    /// Subgroup: a JSON description file or `corpus:<name>`. Defaults to the whole group.
    #[arg(long)]
    pub subgroup: Option<String>,

    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Run the example table of this command's module and exit 4 on any mismatch.
    #[arg(long)]
    pub selftest: bool,
}

impl Common {
    fn rank(&self) -> Option<usize> {
        self.rank.map(|r| r as usize)
    }

    pub fn subgroup(&self) -> Result<SubgroupHandle> {
        load_subgroup(self.subgroup.as_deref(), self.rank())
    }
}

fn read_file(path: &str, what: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("reading {what} {path}: {e}")))
}

pub fn load_subgroup(source: Option<&str>, rank: Option<usize>) -> Result<SubgroupHandle> {
    let h = match source {
        None => return Ok(SubgroupHandle::full(rank.unwrap_or(2))),
        Some(s) => match s.strip_prefix("corpus:") {
            Some(name) => corpus::subgroups()
                .into_iter()
                .find(|(n, _)| *n == name)
                .map(|(_, h)| h)
                .ok_or_else(|| Error::NotFound(format!("no corpus subgroup named {name}")))?,
            None => SubgroupDescription::from_json(&read_file(s, "subgroup file")?)?.to_handle()?,
        },
    };
    match rank {
        Some(k) if k != h.rank() => Err(Error::InvalidInput(format!("--rank {k} but the subgroup has rank {}", h.rank()))),
        _ => Ok(h),
    }
}

/// A permutation file (one image list per generator) or `corpus:<name>`.
pub fn load_action(source: &str) -> Result<FiniteAction> {
    match source.strip_prefix("corpus:") {
        Some(name) => corpus::actions()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, a)| a)
            .ok_or_else(|| Error::NotFound(format!("no corpus action named {name}"))),
        None => serde_json::from_str(&read_file(source, "permutation file")?)
            .map_err(|e| Error::InvalidInput(format!("permutation file {source}: {e}"))),
    }
}

fn load_irs(path: &str) -> Result<FiniteIrs> {
    FiniteIrs::from_json(&read_file(path, "IRS file")?)
}

/// The uniform measure on the conjugates of a finite-index subgroup, otherwise
/// the Dirac mass at a normal subgroup.
fn irs_for(h: &SubgroupHandle) -> Result<FiniteIrs> {
    if h.index().is_some() {
        irs_from_finite_index(h)
    } else {
        irs_from_normal(h)
    }
}

fn parse_words(rank: usize, list: &str) -> Result<Vec<Word>> {
    list.split(',').map(|s| Word::parse_in(rank, s.trim())).collect()
}

fn parse_points(list: &str) -> Result<Vec<usize>> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::InvalidInput(format!("{s:?} is not a point index"))))
        .collect()
}

fn dimension(rank: usize) -> f64 {
    ((2 * rank - 1) as f64).ln()
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::InvalidInput(format!("{flag} is required")))
}

/// Densities for each member: exact for the whole group, otherwise the orbit
/// measure at `s + epsilon` projected to `depth` and transported at dimension `s`.
fn density_for(h: &SubgroupHandle, s: f64, epsilon: f64, ws_radius: usize, depth: usize) -> Result<DensityFamily> {
    if h.index() == Some(1) {
        return Ok(DensityFamily::ExactFull { rank: h.rank() });
    }
    let base = boundary_project(&ws_measure(h, s + epsilon, ws_radius)?, depth)?;
    Ok(DensityFamily::Projected { base, dimension: s })
}

/// Sphere and ball counts.
///
/// CSV columns: `n,count` with `count` the number of subgroup elements of length `n`.
#[derive(Debug, Clone, Args)]
pub struct GrowthArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest word length.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(0..=2000))]
    pub rmax: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GrowthResult {
    rank: usize,
    variant: &'static str,
    #[serde(serialize_with = "hypercrit::serde_big::biguint_vec")]
    sphere_counts: Vec<BigUint>,
    #[serde(serialize_with = "hypercrit::serde_big::biguint_vec")]
    ball_counts: Vec<BigUint>,
}

pub fn growth(a: &GrowthArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let counts = h.sphere_counts(a.rmax as usize);
    let mut csv = String::from("n,count\n");
    for (n, c) in counts.iter().enumerate() {
        csv.push_str(&csv_row(&[n.to_string(), c.to_string()]));
    }
    let mut acc = BigUint::ZERO;
    let ball_counts = counts
        .iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect();
    let result = GrowthResult { rank: h.rank(), variant: h.variant_name(), sphere_counts: counts, ball_counts };
    Report::new("growth", result, csv)
}

/// Critical exponent estimates from exact sphere counts.
///
/// CSV columns: `n,sphere_count,log_ball,ratio_estimate,difference_estimate`;
/// the last two are empty where undefined.
#[derive(Debug, Clone, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=2000))]
    pub rmax: u64,
}

pub fn delta(a: &DeltaArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let est = critical_exponent_estimate(&h, a.rmax as usize)?;
    let mut csv = String::from("n,sphere_count,log_ball,ratio_estimate,difference_estimate\n");
    for (n, c) in est.sphere_counts.iter().enumerate() {
        let ratio = if n == 0 { String::new() } else { fmt12(est.ratio_estimates[n - 1]) };
        let diff = est.difference_estimates.iter().find(|d| d.radius == n).map(|d| fmt12(d.value)).unwrap_or_default();
        csv.push_str(&csv_row(&[n.to_string(), c.to_string(), fmt12(est.log_counts[n]), ratio, diff]));
    }
    Report::new("delta", est, csv)
}

/// Truncated Poincaré series and the divergence diagnostic.
///
/// CSV columns: `n,count,term,cumulative`.
#[derive(Debug, Clone, Args)]
pub struct PoincareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exponent s [default: ln(2k-1)].
    #[arg(long = "s")]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(0..=2000))]
    pub rmax: u64,
    /// Restrict to `{g : g . point in targets}` for this action (file or `corpus:<name>`).
    #[arg(long)]
    pub permutations: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub point: usize,
    /// Comma-separated target points.
    #[arg(long, default_value = "0")]
    pub targets: String,
}

pub fn poincare(a: &PoincareArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let s = a.s.unwrap_or(dimension(h.rank()));
    let r = a.rmax as usize;
    let est = match &a.permutations {
        Some(p) => partial_poincare_over_action(&h, &load_action(p)?, a.point, &parse_points(&a.targets)?, s, r)?,
        None => poincare_partial(&h, s, r)?,
    };
    let divergence = (r >= 4).then(|| diagnose(&est));
    let csv = est.to_csv();
    Report::new("poincare", json!({ "estimate": est, "divergence": divergence }), csv)
}

/// Series over the elements conjugating h into a finite target set, with the
/// half-exponent and shortest-element bounds.
///
/// CSV columns: `element,length,conjugate,term`.
#[derive(Debug, Clone, Args)]
pub struct ConjSeriesArgs {
    #[command(flatten)]
    pub common: Common,
    /// The conjugated element h.
    #[arg(long, required_unless_present = "selftest")]
    pub h: Option<String>,
    /// Comma-separated target elements.
    #[arg(long, required_unless_present = "selftest")]
    pub targets: Option<String>,
    #[arg(long = "s", default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(0..=40))]
    pub rmax: u64,
}

pub fn conj_series(a: &ConjSeriesArgs) -> Result<Report> {
    let gamma = a.common.subgroup()?;
    let k = gamma.rank();
    let h = Word::parse_in(k, required(&a.h, "--h")?)?;
    let targets = parse_words(k, required(&a.targets, "--targets")?)?;
    let r = a.rmax as usize;
    let series = conjugation_series(&gamma, &h, &targets, a.s, r)?;
    let half = half_exponent_check(&gamma, &h, &targets, a.s, r)?;
    let shortest = match shortest_element_bound(&gamma, &h, &targets, a.s, r) {
        Ok(rep) => Some(rep),
        Err(Error::NotFound(_)) => None,
        Err(Error::InvalidInput(_)) if a.s <= 0.0 => None,
        Err(e) => return Err(e),
    };
    let mut csv = String::from("element,length,conjugate,term\n");
    for e in &series.elements {
        let term = (-a.s * e.element.len() as f64).exp();
        csv.push_str(&csv_row(&[e.element.to_string(), e.element.len().to_string(), e.conjugate.to_string(), fmt12(term)]));
    }
    let violated = half.violations > 0 || shortest.as_ref().is_some_and(|s| !s.holds);
    let report = Report::new(
        "conj-series",
        json!({ "series": series, "halfExponent": half, "shortestElement": shortest }),
        csv,
    )?;
    Ok(report.with_outcome(if violated { Outcome::Violated } else { Outcome::Ok }))
}

/// Shadow of a ball as a set of cylinders, with the Busemann bounds on it and
/// optionally the covering check for annulus shadows of the subgroup.
///
/// CSV columns: `stem,depth` for the canonical cylinders of the shadow.
#[derive(Debug, Clone, Args)]
pub struct ShadowArgs {
    #[command(flatten)]
    pub common: Common,
    /// Viewpoint x.
    #[arg(long, default_value = "e")]
    pub x: String,
    /// Center y of the ball.
    #[arg(long, required_unless_present = "selftest")]
    pub y: Option<String>,
    /// Ball radius R.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=30))]
    pub radius: u64,
    /// Extra depth of the ends sampled for the Busemann bounds.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(0..=12))]
    pub sample_depth: u64,
    /// Run the covering check for shadows of subgroup elements with `r <= |g| <= r + width`.
    #[arg(long)]
    pub inner_radius: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub width: usize,
}

pub fn shadow_cmd(a: &ShadowArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let k = h.rank();
    let x = Word::parse_in(k, &a.x)?;
    let y = Word::parse_in(k, required(&a.y, "--y")?)?;
    let radius = a.radius as usize;
    let sh = shadow(k, &x, &y, radius)?;
    let busemann = if x == y { None } else { Some(busemann_shadow_bounds_check(k, &x, &y, radius, a.sample_depth as usize)?) };
    let cover = a.inner_radius.map(|r| shadow_cover_check(&h, a.width, radius, r)).transpose()?;
    let mut csv = String::from("stem,depth\n");
    for stem in sh.cylinders.stems() {
        csv.push_str(&csv_row(&[stem.to_string(), stem.len().to_string()]));
    }
    let violated = busemann.as_ref().is_some_and(|b| b.violations > 0) || cover.as_ref().is_some_and(|c| !c.covered);
    let report = Report::new("shadow", json!({ "shadow": sh, "busemann": busemann, "cover": cover }), csv)?;
    Ok(report.with_outcome(if violated { Outcome::Violated } else { Outcome::Ok }))
}

/// Normalized orbit measure on a ball and its projection to boundary cylinders.
///
/// CSV columns: `stem,mass` for the projected measure, or
/// `epsilon,exponent,stem,mass` with `--ladder`.
#[derive(Debug, Clone, Args)]
pub struct PsMeasureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exponent of the orbit measure; with `--ladder`, the exponent estimate [default: ln(2k-1)].
    #[arg(long = "s")]
    pub s: Option<f64>,
    /// Radius of the ball carrying the atoms.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(0..=16))]
    pub radius: u64,
    /// Cylinder depth of the projection.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=10))]
    pub depth: u64,
    /// Evaluate at `s + eps` for each eps of the fixed ladder.
    #[arg(long)]
    pub ladder: bool,
}

pub fn ps_measure(a: &PsMeasureArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let s = a.s.unwrap_or(dimension(h.rank()));
    let (radius, depth) = (a.radius as usize, a.depth as usize);
    if a.ladder {
        let ladder = ws_ladder(&h, s, radius, depth)?;
        let mut csv = String::from("epsilon,exponent,stem,mass\n");
        for rung in &ladder.rungs {
            for stem in rung.measure.stems() {
                csv.push_str(&csv_row(&[fmt12(rung.epsilon), fmt12(rung.exponent), stem.to_string(), fmt12(rung.measure.mass(&stem))]));
            }
        }
        return Report::new("ps-measure", json!({ "ladder": ladder }), csv);
    }
    let m = ws_measure(&h, s, radius)?;
    let projected = boundary_project(&m, depth)?;
    let mut csv = String::from("stem,mass\n");
    for stem in projected.stems() {
        csv.push_str(&csv_row(&[stem.to_string(), fmt12(projected.mass(&stem))]));
    }
    Report::new("ps-measure", json!({ "orbitMeasure": m, "projection": projected }), csv)
}

/// Shadow masses `nu_o(S_R(o, g^-1 o)) e^{s|g|}` over subgroup elements.
///
/// CSV columns: `element,length,shadow_mass,ratio,cocycle,ratio_over_cocycle`.
#[derive(Debug, Clone, Args)]
pub struct ShadowLemmaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exponent and density dimension [default: ln(2k-1)].
    #[arg(long = "s")]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=20))]
    pub shadow_radius: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=14))]
    pub rmax: u64,
    /// Orbit measure offset above s for non-full subgroups.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Radius of the orbit measure for non-full subgroups.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=16))]
    pub ws_radius: u64,
    /// Projection depth for non-full subgroups.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=10))]
    pub depth: u64,
    /// Also report cocycle residuals over this radius.
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=8))]
    pub cocycle_radius: Option<u64>,
}

#[derive(Serialize)]
struct RatioCount {
    ratio: String,
    count: usize,
}

pub fn shadow_lemma(a: &ShadowLemmaArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let s = a.s.unwrap_or(dimension(h.rank()));
    let density = density_for(&h, s, a.epsilon, a.ws_radius as usize, a.depth as usize)?;
    let rep = shadow_lemma_check(&h, &density, s, a.shadow_radius as usize, a.rmax as usize)?;
    let exact = match density {
        DensityFamily::ExactFull { rank } if (s - dimension(rank)).abs() < 1e-15 => {
            let mut counts: Vec<(BigRational, usize)> = Vec::new();
            for (_, q) in exact_shadow_ratios(rank, a.shadow_radius as usize, a.rmax as usize)? {
                match counts.iter_mut().find(|(v, _)| *v == q) {
                    Some(entry) => entry.1 += 1,
                    None => counts.push((q, 1)),
                }
            }
            counts.sort();
            Some(counts.into_iter().map(|(q, count)| RatioCount { ratio: q.to_string(), count }).collect::<Vec<_>>())
        }
        _ => None,
    };
    let cocycle = match a.cocycle_radius {
        Some(r) => {
            let mut atlas = DensityAtlas::new();
            atlas.insert(&h, "subgroup", density.clone());
            Some(cocycle_residuals(&atlas, &h, r as usize)?)
        }
        None => None,
    };
    let mut csv = String::from("element,length,shadow_mass,ratio,cocycle,ratio_over_cocycle\n");
    for row in &rep.rows {
        csv.push_str(&csv_row(&[
            row.element.to_string(),
            row.element.len().to_string(),
            fmt12(row.shadow_mass),
            fmt12(row.ratio),
            fmt12(row.cocycle),
            fmt12(row.ratio_over_cocycle),
        ]));
    }
    Report::new(
        "shadow-lemma",
        json!({ "density": density_label(&density), "report": rep, "exactRatios": exact, "cocycle": cocycle }),
        csv,
    )
}

fn density_label(d: &DensityFamily) -> serde_json::Value {
    match d {
        DensityFamily::ExactFull { rank } => json!({ "kind": "exactFull", "rank": rank, "dimension": d.dimension() }),
        DensityFamily::Projected { base, dimension } => {
            json!({ "kind": "projected", "rank": base.rank(), "depth": base.depth(), "dimension": dimension, "distortion": base.distortion() })
        }
    }
}

/// Returns of a point to a target set along annuli `r <= |g| <= r + width`.
///
/// CSV columns: `r,count,normalized`.
#[derive(Debug, Clone, Args)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Permutation file (one image list per generator) or `corpus:<name>`.
    #[arg(long, default_value = "corpus:three-cosets")]
    pub permutations: String,
    #[arg(long, default_value_t = 0)]
    pub point: usize,
    /// Comma-separated target points.
    #[arg(long, default_value = "0,1")]
    pub targets: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=20))]
    pub width: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(0..=2000))]
    pub rmax: u64,
    /// Normalizing exponent [default: ln(2k-1)].
    #[arg(long = "s")]
    pub s: Option<f64>,
}

pub fn recurrence(a: &RecurrenceArgs) -> Result<Report> {
    let action = load_action(&a.permutations)?;
    if let Some(k) = a.common.rank() {
        if k != action.rank() {
            return Err(Error::InvalidInput(format!("--rank {k} but the action has rank {}", action.rank())));
        }
    }
    let s = a.s.unwrap_or(dimension(action.rank()));
    let rep = recurrence_counts(&action, a.point, &parse_points(&a.targets)?, a.width as usize, a.rmax as usize, s)?;
    let mut csv = String::from("r,count,normalized\n");
    for (r, (c, v)) in rep.counts.iter().zip(&rep.normalized).enumerate() {
        csv.push_str(&csv_row(&[r.to_string(), c.to_string(), fmt12(*v)]));
    }
    Report::new("recurrence", rep, csv)
}

/// Expected critical exponent of a finite IRS and the half-dimension verdicts.
///
/// CSV columns: `member,weight,variant,slope,lower,upper,verdict`.
#[derive(Debug, Clone, Args)]
pub struct IrsReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// IRS file: a JSON array of subgroup descriptions with weights. Without it,
    /// the IRS comes from `--subgroup` (conjugates of a finite-index subgroup,
    /// or the Dirac mass at a normal one).
    #[arg(long)]
    pub irs: Option<String>,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=2000))]
    pub rmax: u64,
}

pub fn irs_report(a: &IrsReportArgs) -> Result<Report> {
    let mu = match &a.irs {
        Some(path) => {
            let mu = load_irs(path)?;
            if let Some(k) = a.common.rank() {
                if k != mu.rank() {
                    return Err(Error::InvalidInput(format!("--rank {k} but the IRS has rank {}", mu.rank())));
                }
            }
            mu
        }
        None => irs_for(&a.common.subgroup()?)?,
    };
    let r = a.rmax as usize;
    let expected = expected_critical_exponent(&mu, r)?;
    let theorem = if expected.members.iter().any(|m| m.finite_group) { None } else { Some(theorem_one_check(&mu, r)?) };
    let mut csv = String::from("member,weight,variant,slope,lower,upper,verdict\n");
    for m in &expected.members {
        let verdict = theorem
            .as_ref()
            .map(|t| serde_json::to_value(t.members[m.index].verdict).expect("verdict serializes").as_str().unwrap_or("").to_string())
            .unwrap_or_default();
        csv.push_str(&csv_row(&[
            m.index.to_string(),
            fmt12(m.weight),
            m.variant.to_string(),
            fmt12(m.slope_estimate),
            fmt12(m.bracket.0),
            fmt12(m.bracket.1),
            verdict,
        ]));
    }
    let violated = theorem.as_ref().is_some_and(|t| t.verdict == Verdict::Contradiction);
    let report = Report::new(
        "irs-report",
        json!({ "members": mu.summaries(), "expectedExponent": expected, "halfDimension": theorem }),
        csv,
    )?;
    Ok(report.with_outcome(if violated { Outcome::Violated } else { Outcome::Ok }))
}

/// The chain of truncated series inequalities for a subgroup and a finite set
/// V, optionally with the summed cocycle bounds of the associated IRS.
///
/// CSV columns: `radius,series_radius,exponent,alpha,beta,half_exponent_series,
/// shortest_conjugator_sum,conjugation_sum,meeting_series,first_holds,second_holds,empty_chain`.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated nontrivial elements forming V.
    #[arg(long, required_unless_present = "selftest")]
    pub v: Option<String>,
    /// Conjugators range over the ball of this radius.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=14))]
    pub radius: u64,
    /// Exponent [default: ln(2k-1)].
    #[arg(long = "s")]
    pub s: Option<f64>,
    /// Also check the summed cocycle bounds for the IRS built from the subgroup.
    #[arg(long)]
    pub cocycle: bool,
    #[arg(long, default_value_t = 1)]
    pub width: usize,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(0..=14))]
    pub rmax: u64,
    #[arg(long, default_value_t = 1)]
    pub shadow_radius: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=16))]
    pub ws_radius: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=10))]
    pub depth: u64,
}

pub fn pipeline(a: &PipelineArgs) -> Result<Report> {
    let h = a.common.subgroup()?;
    let v = parse_words(h.rank(), required(&a.v, "--v")?)?;
    let chain = divergence_pipeline(&h, &v, a.radius as usize, a.s)?;
    let cocycle = if a.cocycle {
        let s = a.s.unwrap_or(dimension(h.rank()));
        let mu = irs_for(&h)?;
        let mut atlas = DensityAtlas::new();
        for (i, m) in mu.members().iter().enumerate() {
            atlas.insert(&m.handle, format!("member {i}"), density_for(&m.handle, s, a.epsilon, a.ws_radius as usize, a.depth as usize)?);
        }
        Some(summed_cocycle_check(&mu, &atlas, a.width, a.rmax as usize, a.shadow_radius, s)?)
    } else {
        None
    };
    let mut csv = String::from(
        "radius,series_radius,exponent,alpha,beta,half_exponent_series,shortest_conjugator_sum,conjugation_sum,meeting_series,first_holds,second_holds,empty_chain\n",
    );
    csv.push_str(&csv_row(&[
        chain.radius.to_string(),
        chain.series_radius.to_string(),
        fmt12(chain.exponent),
        fmt12(chain.alpha),
        fmt12(chain.beta),
        fmt12(chain.half_exponent_series),
        fmt12(chain.shortest_conjugator_sum),
        fmt12(chain.conjugation_sum),
        fmt12(chain.meeting_series),
        chain.first_holds.to_string(),
        chain.second_holds.to_string(),
        chain.empty_chain.to_string(),
    ]));
    let outcome = if chain.empty_chain {
        Outcome::Empty
    } else if !chain.first_holds || !chain.second_holds || cocycle.as_ref().is_some_and(|c| !c.all_hold) {
        Outcome::Violated
    } else {
        Outcome::Ok
    };
    Ok(Report::new("pipeline", json!({ "chain": chain, "summedCocycle": cocycle }), csv)?.with_outcome(outcome))
}

/// Bottom of the spectrum from the critical exponent and the dimension.
///
/// CSV columns: `delta,dim,lambda0`.
#[derive(Debug, Clone, Args)]
pub struct Lambda0Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, required_unless_present = "selftest", allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, required_unless_present = "selftest", allow_negative_numbers = true)]
    pub dim: Option<f64>,
}

pub fn lambda0(a: &Lambda0Args) -> Result<Report> {
    let (delta, dim) = (*required(&a.delta, "--delta")?, *required(&a.dim, "--dim")?);
    let value = lambda0_from_delta(delta, dim)?;
    let csv = format!("delta,dim,lambda0\n{},{},{}\n", fmt12(delta), fmt12(dim), fmt12(value));
    Report::new("lambda0", json!({ "delta": delta, "dim": dim, "lambda0": value }), csv)
}
