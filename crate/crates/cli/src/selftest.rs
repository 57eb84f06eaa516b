//! Example tables run by `--selftest`, one per library module.

use hypercrit::boundary::{
    boundary_project, busemann_shadow_bounds_check, cocycle_residuals, exact_conformal_density, exact_shadow_ratios, shadow,
    shadow_cover_check, shadow_lemma_check, ws_measure, CylinderSet, DensityAtlas, DensityFamily,
};
use hypercrit::corpus;
use hypercrit::irs::{
    divergence_pipeline, expected_critical_exponent, irs_from_finite_index, irs_from_normal, recurrence_counts,
    summed_cocycle_check, theorem_one_check, FiniteIrs, Verdict,
};
use hypercrit::series::{
    conjugation_series, critical_exponent_estimate, divergence_diagnostic, half_exponent_check, lambda0_from_delta,
    partial_poincare_over_action, poincare_partial, shortest_element_bound, GrowthClass,
};
use hypercrit::space::{
    tree_axis, tree_dist, tree_gromov_product, IsometryClass, Letter, PlaneEnd, PlaneIsometry, PlanePoint, TreeEnd, Word,
};
use hypercrit::subgroups::{annulus_count, coornaert_ratio, AbelianKernel, FiniteAction, StallingsGraph, SubgroupHandle};
use hypercrit::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use hypercrit::series::fmt12;

use crate::output::{csv_row, Outcome, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Module {
    Space,
    Subgroups,
    Series,
    Boundary,
    Irs,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

struct Table {
    module: &'static str,
    checks: Vec<Check>,
}

impl Table {
    fn new(module: &'static str) -> Self {
        Table { module, checks: Vec::new() }
    }

    fn push(&mut self, name: &str, expected: impl ToString, actual: impl ToString, pass: bool) {
        self.checks.push(Check {
            module: self.module,
            name: name.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, actual: T) {
        let pass = expected == actual;
        self.push(name, format!("{expected:?}"), format!("{actual:?}"), pass);
    }

    fn close(&mut self, name: &str, expected: f64, actual: f64, tol: f64) {
        self.push(name, fmt12(expected), fmt12(actual), (expected - actual).abs() <= tol);
    }

    fn holds(&mut self, name: &str, condition: &str, actual: impl std::fmt::Debug, pass: bool) {
        self.push(name, condition, format!("{actual:?}"), pass);
    }

    /// Records a library error as a failed check instead of aborting the table.
    fn run(&mut self, name: &str, f: impl FnOnce(&mut Table) -> Result<()>) {
        if let Err(e) = f(self) {
            self.push(name, "no error", e, false);
        }
    }
}

fn w(s: &str) -> Word {
    Word::parse(s).expect("example words are valid")
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn space_table() -> Vec<Check> {
    let mut t = Table::new("space");
    let (a, b) = (Letter::new(0, false), Letter::new(1, false));
    t.eq("reduce [a, a^-1, b]", w("b"), Word::reduce([a, a.inverse(), b]));
    t.eq("reduce []", Word::identity(), Word::reduce([]));
    t.eq("reduce [a, b, b^-1, a]", w("aa"), Word::reduce([a, b, b.inverse(), a]));
    let o = Word::identity();
    t.eq("dist(e, ab)", 2, tree_dist(&o, &w("ab")));
    t.eq("dist(a, b)", 2, tree_dist(&w("a"), &w("b")));
    t.run("plane dist(i, 2i)", |t| {
        t.close("plane dist(i, 2i)", 2f64.ln(), PlanePoint::i().dist(&PlanePoint::new(0.0, 2.0)?), 1e-12);
        Ok(())
    });
    t.eq("(ab | abb)_e", 2, tree_gromov_product(&w("ab"), &w("abb"), &o));
    t.eq("(a | b)_e", 0, tree_gromov_product(&w("a"), &w("b"), &o));
    t.eq("(aBa | aBa)_e", 3, tree_gromov_product(&w("aBa"), &w("aBa"), &o));
    t.run("visual distances", |t| {
        let e = std::f64::consts::E;
        let (a_inf, b_inf, ab_inf) = (TreeEnd::parse("(a)")?, TreeEnd::parse("(b)")?, TreeEnd::parse("a(b)")?);
        t.close("rho(a^inf, b^inf)", 1.0, a_inf.visual_distance(&b_inf, e), 0.0);
        t.close("rho(a^inf, a b^inf)", (-1f64).exp(), a_inf.visual_distance(&ab_inf, e), 1e-15);
        t.close("rho(xi, xi)", 0.0, ab_inf.visual_distance(&ab_inf, e), 0.0);
        Ok(())
    });
    t.run("busemann", |t| {
        let a_inf = TreeEnd::parse("(a)")?;
        t.eq("beta_{a^inf}(e, a)", 1, a_inf.busemann(&o, &w("a")));
        t.eq("beta_xi(x, x)", 0, a_inf.busemann(&w("bA"), &w("bA")));
        let up = PlaneEnd::Infinity.busemann(&PlanePoint::i(), &PlanePoint::new(0.0, 2.0)?);
        t.close("plane beta_inf(i, 2i)", 2f64.ln(), up, 1e-12);
        Ok(())
    });
    t.run("classification", |t| {
        t.eq("diag(2, 1/2)", IsometryClass::Hyperbolic, PlaneIsometry::diagonal(2.0)?.classify());
        t.eq("(1 1; 0 1)", IsometryClass::Parabolic, PlaneIsometry::new(1.0, 1.0, 0.0, 1.0)?.classify());
        t.holds("tree ab", "hyperbolic", tree_axis(&w("ab")).is_ok(), tree_axis(&w("ab")).is_ok());
        Ok(())
    });
    t.run("axes", |t| {
        let ab = tree_axis(&w("ab"))?;
        t.eq("axis(ab)", (TreeEnd::parse("(BA)")?, TreeEnd::parse("(ab)")?, 2), (ab.repelling, ab.attracting, ab.translation_length));
        let c = tree_axis(&w("abA"))?;
        t.eq("axis(abA)", (TreeEnd::parse("a(B)")?, TreeEnd::parse("a(b)")?, 1), (c.repelling, c.attracting, c.translation_length));
        let (minus, plus, len) = PlaneIsometry::diagonal(2.0)?.axis()?;
        let fixed = minus.approx_eq(&PlaneEnd::Real(0.0)) && plus == PlaneEnd::Infinity;
        t.holds("axis(diag(2, 1/2)) endpoints", "(0, inf)", (minus, plus), fixed);
        t.close("axis(diag(2, 1/2)) length", 2.0 * 2f64.ln(), len, 1e-12);
        Ok(())
    });
    t.checks
}

fn subgroups_table() -> Vec<Check> {
    let mut t = Table::new("subgroups");
    t.run("stallings", |t| {
        let g = StallingsGraph::fold(2, &[w("a")])?;
        t.eq("<a> vertices", 1, g.vertex_count());
        let g = StallingsGraph::fold(2, &[w("aa"), w("ab")])?;
        t.eq("<aa, ab> vertices", 2, g.vertex_count());
        t.eq("<aa, ab> contains a", false, g.contains(&w("a")));
        let g = StallingsGraph::fold(2, &[w("a"), w("b")])?;
        t.eq("<a, b> vertices", 1, g.vertex_count());
        t.eq("<a, b> is complete", true, g.is_complete());
        Ok(())
    });
    let comm = SubgroupHandle::commutator(2);
    t.eq("[F2,F2] contains abAB", true, comm.contains(&w("abAB")));
    t.eq("[F2,F2] contains a", false, comm.contains(&w("a")));
    t.run("membership <aa, ab>", |t| {
        let h = SubgroupHandle::from_generators(2, &[w("aa"), w("ab")])?;
        t.eq("<aa, ab> contains aaab", true, h.contains(&w("aaab")));
        Ok(())
    });
    let f2 = SubgroupHandle::full(2);
    t.eq("sphere F2 n=2", big(12), f2.sphere_count(2));
    t.eq("sphere [F2,F2] n=4", big(8), comm.sphere_count(4));
    t.run("sphere <a>", |t| {
        t.eq("sphere <a> n=5", big(2), SubgroupHandle::cyclic(2, &w("a"))?.sphere_count(5));
        Ok(())
    });
    t.run("annuli", |t| {
        t.eq("annulus F2 [1,2]", big(16), annulus_count(&f2, 1, 2)?.count);
        t.eq("annulus F2 [0,0]", big(1), annulus_count(&f2, 0, 0)?.count);
        t.eq("annulus [F2,F2] [0,4]", big(9), annulus_count(&comm, 0, 4)?.count);
        Ok(())
    });
    t.run("annulus ratios", |t| {
        let full = coornaert_ratio(&f2, 1, 20, 3f64.ln())?;
        let flat = full.rows[1..].iter().all(|r| (r.ratio - 16.0 / 3.0).abs() < 1e-9);
        t.holds("F2 k=1 ratio", "16/3 for r >= 1", full.rows[1].ratio, flat);
        let cyclic = coornaert_ratio(&SubgroupHandle::cyclic(2, &w("a"))?, 1, 10, 0.0)?;
        let flat = cyclic.rows[1..].iter().all(|r| (r.ratio - 4.0).abs() < 1e-12);
        t.holds("<a> k=1 ratio", "4 for r >= 1 (closed annulus)", cyclic.rows[1].ratio, flat);
        let stab = SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0)?;
        let idx3 = coornaert_ratio(&stab, 2, 14, 3f64.ln())?;
        t.holds("index 3 k=2 max/min", "< 10", idx3.max_over_min, idx3.max_over_min < 10.0);
        Ok(())
    });
    t.run("conjugation", |t| {
        let ab = AbelianKernel::abelianization(2);
        let n = SubgroupHandle::kernel_abelian(ab);
        t.eq("normal conjugate", n.key(), n.conjugate(&w("aB"))?.key());
        let a = SubgroupHandle::cyclic(2, &w("a"))?;
        let moved = a.conjugate(&w("b"))?;
        t.eq("<a> by b", true, moved.same_subgroup(&SubgroupHandle::cyclic(2, &w("baB"))?));
        let act = corpus::three_cosets();
        let stab = SubgroupHandle::coset_stabilizer(act.clone(), 0)?;
        let g = w("aB");
        let target = SubgroupHandle::coset_stabilizer(act.clone(), act.act(&g, 0))?;
        t.eq("Stab(0) by aB", true, stab.conjugate(&g)?.same_subgroup(&target));
        Ok(())
    });
    t.checks
}

fn series_table() -> Vec<Check> {
    let mut t = Table::new("series");
    let f2 = SubgroupHandle::full(2);
    let ln3 = 3f64.ln();
    t.run("poincare", |t| {
        t.close("F2 s=ln3 R=10", 1.0 + 40.0 / 3.0, poincare_partial(&f2, ln3, 10)?.partial_sum, 1e-9);
        let est = poincare_partial(&f2, 4f64.ln(), 20)?;
        let tail = est.tail_bound.unwrap_or(f64::INFINITY);
        let brackets = est.partial_sum <= 5.0 && 5.0 <= est.partial_sum + tail && est.partial_sum + tail - 5.0 < 1e-3;
        t.holds("F2 s=ln4 R=20 brackets 5", "partial <= 5 <= partial + tail, within 1e-3", (est.partial_sum, tail), brackets);
        let a = SubgroupHandle::cyclic(2, &w("a"))?;
        let e = |k: f64| (-k).exp();
        t.close("<a> s=1 R=3", 1.0 + 2.0 * (e(1.0) + e(2.0) + e(3.0)), poincare_partial(&a, 1.0, 3)?.partial_sum, 1e-12);
        Ok(())
    });
    t.run("exponent", |t| {
        let est = critical_exponent_estimate(&f2, 20)?;
        let exact = est.difference_estimates.iter().filter(|d| d.radius >= 2).all(|d| (d.value - ln3).abs() < 1e-12);
        t.holds("F2 Rmax=20 differences", "ln 3 from R = 2", est.slope_estimate, exact);
        t.close("<a> Rmax=20", 0.0, critical_exponent_estimate(&SubgroupHandle::cyclic(2, &w("a"))?, 20)?.slope_estimate, 1e-12);
        let c = critical_exponent_estimate(&SubgroupHandle::commutator(2), 40)?;
        t.holds("[F2,F2] Rmax=40", "slope in [0.95, 1.0987]", c.slope_estimate, (0.95..=1.0987).contains(&c.slope_estimate));
        Ok(())
    });
    t.run("divergence", |t| {
        t.eq("F2 at ln3", GrowthClass::LinearOrFaster, divergence_diagnostic(&f2, ln3, 20)?.classification);
        t.eq("F2 at ln3 + 0.5", GrowthClass::ApparentlyBounded, divergence_diagnostic(&f2, ln3 + 0.5, 20)?.classification);
        let a = SubgroupHandle::cyclic(2, &w("a"))?;
        t.eq("<a> at 0", GrowthClass::LinearOrFaster, divergence_diagnostic(&a, 0.0, 20)?.classification);
        Ok(())
    });
    t.run("orbit condition", |t| {
        let act = corpus::three_cosets();
        let all = partial_poincare_over_action(&f2, &act, 0, &[0, 1, 2], ln3, 8)?;
        t.close("U = all", poincare_partial(&f2, ln3, 8)?.partial_sum, all.partial_sum, 1e-12);
        t.close("U = empty", 0.0, partial_poincare_over_action(&f2, &act, 0, &[], ln3, 8)?.partial_sum, 0.0);
        let brute: f64 = hypercrit::space::TreeModel::new(2)?
            .ball(6)
            .iter()
            .filter(|g| act.act(g, 0) == 0)
            .map(|g| (-ln3 * g.len() as f64).exp())
            .sum();
        t.close("3 cosets U={0} R=6", brute, partial_poincare_over_action(&f2, &act, 0, &[0], ln3, 6)?.partial_sum, 1e-12);
        Ok(())
    });
    t.run("conjugation series", |t| {
        let centralizer: f64 = (-5i64..=5).map(|n| (-(n.abs() as f64)).exp()).sum();
        t.close("h=a V={a} s=1 R=5", centralizer, conjugation_series(&f2, &w("a"), &[w("a")], 1.0, 5)?.estimate.partial_sum, 1e-12);
        let coset: f64 = (-4i64..=4).map(|n| (-((n.abs() + 1) as f64)).exp()).sum();
        t.close("h=a V={baB} s=1 R=5", coset, conjugation_series(&f2, &w("a"), &[w("baB")], 1.0, 5)?.estimate.partial_sum, 1e-12);
        t.close("h=a V={b}", 0.0, conjugation_series(&f2, &w("a"), &[w("b")], 1.0, 5)?.estimate.partial_sum, 0.0);
        Ok(())
    });
    t.run("half exponent", |t| {
        let rep = half_exponent_check(&f2, &w("ab"), &[w("ab")], 1.0, 6)?;
        t.eq("h=ab K={ab} equality", (0, Some(0.0)), (rep.violations, rep.worst_log_slack));
        let rep = half_exponent_check(&f2, &w("Babb"), &[w("ab")], 1.0, 6)?;
        let tight = rep.violations == 0 && rep.worst_log_slack.is_some_and(|s| s.abs() < 1e-12);
        t.holds("h=Babb K={ab} equality at b", "0 violations, slack 0", rep.worst_log_slack, tight);
        let h = w("ab").conjugate_by(&w("ba").inverse());
        t.eq("h=(ba)^-1 ab (ba) violations", 0, half_exponent_check(&f2, &h, &[w("ab")], 1.0, 6)?.violations);
        Ok(())
    });
    t.run("shortest element", |t| {
        let s = 0.7;
        let rep = shortest_element_bound(&f2, &w("Babb"), &[w("ab")], s, 9)?;
        let closed: f64 = (-4i64..=4).map(|n| (-s * (2 * n.abs() + 1) as f64).exp()).sum();
        t.close("h=Babb series", closed, rep.series_value, 1e-12);
        t.eq("h=Babb shortest and bound", (w("b"), true), (rep.shortest, rep.holds));
        let rep = shortest_element_bound(&f2, &w("ab"), &[w("ab")], s, 9)?;
        t.eq("h=ab shortest and bound", (Word::identity(), true), (rep.shortest, rep.holds));
        let missing = shortest_element_bound(&f2, &w("a"), &[w("b")], s, 9);
        t.holds("h=a K={b}", "not found", &missing.as_ref().err(), matches!(missing, Err(Error::NotFound(_))));
        Ok(())
    });
    t.run("lambda0", |t| {
        t.close("lambda0(2, 2)", 0.0, lambda0_from_delta(2.0, 2.0)?, 0.0);
        t.close("lambda0(0.5, 2)", 1.0, lambda0_from_delta(0.5, 2.0)?, 0.0);
        t.close("lambda0(1.5, 2)", 0.75, lambda0_from_delta(1.5, 2.0)?, 0.0);
        let jump = (lambda0_from_delta(1.0, 2.0)? - lambda0_from_delta(1.0 + 1e-13, 2.0)?).abs();
        t.holds("continuity at d/2", "< 1e-12", jump, jump < 1e-12);
        Ok(())
    });
    t.checks
}

fn boundary_table() -> Vec<Check> {
    let mut t = Table::new("boundary");
    let f2 = SubgroupHandle::full(2);
    let o = Word::identity();
    let ln3 = 3f64.ln();
    t.run("shadows", |t| {
        t.eq("S_0(e, ab)", CylinderSet::cylinder(2, &w("ab"))?, shadow(2, &o, &w("ab"), 0)?.cylinders);
        t.eq("S_1(e, ab)", CylinderSet::cylinder(2, &w("a"))?, shadow(2, &o, &w("ab"), 1)?.cylinders);
        t.eq("S_2(e, e)", CylinderSet::full(2), shadow(2, &o, &o, 2)?.cylinders);
        Ok(())
    });
    t.run("covers", |t| {
        let c = shadow_cover_check(&f2, 0, 0, 3)?;
        t.eq("F2 k=0 R=0 r=3", (true, 1), (c.covered, c.max_multiplicity));
        let c = shadow_cover_check(&f2, 1, 1, 4)?;
        t.holds("F2 k=1 R=1 r=4", "covered, multiplicity <= 9", (c.covered, c.max_multiplicity), c.covered && c.max_multiplicity <= 9);
        let index2 = SubgroupHandle::kernel_finite(corpus::a_parity())?;
        t.eq("index 2, k=2 R=2 r=5 covered", true, shadow_cover_check(&index2, 2, 2, 5)?.covered);
        Ok(())
    });
    t.run("busemann on shadows", |t| {
        let r0 = busemann_shadow_bounds_check(2, &o, &w("ab"), 0, 4)?;
        t.eq("R=0 range", (Some(2), Some(2), 0), (r0.min_busemann, r0.max_busemann, r0.violations));
        t.eq("beta at aB a^inf", 0, TreeEnd::parse("aB(a)")?.busemann(&o, &w("ab")));
        let r1 = busemann_shadow_bounds_check(2, &o, &w("ab"), 1, 4)?;
        t.eq("R=1 range", (Some(0), Some(2), 0), (r1.min_busemann, r1.max_busemann, r1.violations));
        Ok(())
    });
    t.run("orbit measures", |t| {
        let m = ws_measure(&f2, 4f64.ln(), 2)?;
        let atom_e = m.atoms.iter().find(|(g, _)| g.is_empty()).map(|a| a.1).unwrap_or(0.0);
        t.close("atom e", 1.0 / 2.75, atom_e, 1e-12);
        t.close("atoms under a", (0.25 + 3.0 / 16.0) / 2.75, m.mass_with_prefix(&w("a")), 1e-12);
        let c = ws_measure(&SubgroupHandle::cyclic(2, &w("a"))?, 1.0, 1)?;
        let ratio = c.atoms.iter().find(|(g, _)| *g == w("a")).map(|a| a.1).unwrap_or(0.0) / c.atoms[0].1;
        t.eq("<a> s=1 R=1 atoms", 3, c.atoms.len());
        t.close("<a> atom ratio", (-1f64).exp(), ratio, 1e-12);
        let p = boundary_project(&m, 1)?;
        t.close("projected Cyl(a)", 0.25, p.mass(&w("a")), 1e-12);
        t.close("projected total", 1.0, boundary_project(&m, 4)?.total_mass(), 1e-12);
        Ok(())
    });
    t.run("exact density", |t| {
        let quarter = BigRational::new(1.into(), 4.into());
        t.eq("nu_e(Cyl a)", Some(quarter.clone()), exact_conformal_density(2, &o, 3)?.exact_mass(&w("a")));
        let at_a = exact_conformal_density(2, &w("a"), 3)?;
        t.eq("nu_a(Cyl a)", Some(quarter * BigRational::from_integer(3.into())), at_a.exact_mass(&w("a")));
        t.eq("nu_a total", Some(BigRational::from_integer(1.into())), at_a.exact_mass(&o));
        Ok(())
    });
    t.run("shadow ratios", |t| {
        let three_quarters = BigRational::new(3.into(), 4.into());
        let ratios = exact_shadow_ratios(2, 0, 8)?;
        let all = ratios.iter().all(|(_, r)| *r == three_quarters);
        t.holds("R=0, |g| <= 8", "3/4 exactly", ratios.len(), all);
        let r1 = shadow_lemma_check(&f2, &DensityFamily::ExactFull { rank: 2 }, ln3, 1, 8)?;
        let within = r1.min_ratio >= 0.75 - 1e-12 && r1.max_ratio <= 3.0 + 1e-12;
        t.holds("R=1, |g| <= 8", "within [3/4, 3]", (r1.min_ratio, r1.max_ratio), within);
        Ok(())
    });
    t.run("cocycle", |t| {
        let mut atlas = DensityAtlas::new();
        atlas.insert(&f2, "F2", DensityFamily::ExactFull { rank: 2 });
        let rep = cocycle_residuals(&atlas, &f2, 3)?;
        t.holds("pi = 1", "min = max = 1", (rep.min_cocycle, rep.max_cocycle), (rep.min_cocycle - 1.0).abs() < 1e-12 && (rep.max_cocycle - 1.0).abs() < 1e-12);
        t.holds("residual", "<= 1e-12", rep.max_residual, rep.max_residual <= 1e-12);
        Ok(())
    });
    t.checks
}

fn irs_table() -> Vec<Check> {
    let mut t = Table::new("irs");
    let ln3 = 3f64.ln();
    t.run("finite index", |t| {
        t.eq("a-parity kernel", 1, irs_from_finite_index(&SubgroupHandle::kernel_finite(corpus::a_parity())?)?.len());
        let stab = SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0)?;
        let mu = irs_from_finite_index(&stab)?;
        let weights: Vec<f64> = mu.members().iter().map(|m| m.weight).collect();
        t.holds("Stab in S3", "three conjugates of weight 1/3", &weights, weights.len() == 3 && weights.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
        t.eq("full group", 1, irs_from_finite_index(&SubgroupHandle::full(2))?.len());
        Ok(())
    });
    t.run("normal", |t| {
        t.eq("[F2,F2]", 1, irs_from_normal(&SubgroupHandle::commutator(2))?.len());
        let z3 = SubgroupHandle::kernel_finite(FiniteAction::new(vec![vec![1, 2, 0], vec![1, 2, 0]])?)?;
        t.eq("kernel to Z/3", 1, irs_from_normal(&z3)?.len());
        let a = irs_from_normal(&SubgroupHandle::cyclic(2, &w("a"))?);
        t.holds("<a>", "invalid input", a.as_ref().err(), matches!(a, Err(Error::InvalidInput(_))));
        Ok(())
    });
    t.run("expected exponent", |t| {
        let dirac = irs_from_normal(&SubgroupHandle::full(2))?;
        t.close("Dirac F2 Rmax=20", ln3, expected_critical_exponent(&dirac, 20)?.value, 1e-12);
        let mu = irs_from_finite_index(&SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0)?)?;
        t.close("three conjugates Rmax=14", ln3, expected_critical_exponent(&mu, 14)?.value, 0.02);
        let comm = irs_from_normal(&SubgroupHandle::commutator(2))?;
        let v = expected_critical_exponent(&comm, 40)?.value;
        t.holds("Dirac [F2,F2] Rmax=40", "in [0.95, 1.0987]", v, (0.95..=1.0987).contains(&v));
        Ok(())
    });
    t.run("half dimension", |t| {
        let comm = irs_from_normal(&SubgroupHandle::commutator(2))?;
        t.eq("Dirac [F2,F2] Rmax=40", Verdict::Pass, theorem_one_check(&comm, 40)?.verdict);
        let mu = irs_from_finite_index(&SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0)?)?;
        t.eq("finite index", Verdict::Pass, theorem_one_check(&mu, 14)?.verdict);
        let bad = FiniteIrs::dirac(SubgroupHandle::from_generators(2, &[w("aa"), w("ab")])?);
        t.holds("Dirac at <aa, ab>", "invalid IRS", bad.as_ref().err(), matches!(bad, Err(Error::InvalidIrs(_))));
        Ok(())
    });
    t.run("recurrence", |t| {
        let point = recurrence_counts(&FiniteAction::trivial(2), 0, &[0], 1, 8, ln3)?;
        let annuli: Vec<BigUint> = (0..=8).map(|r| annulus_count(&SubgroupHandle::full(2), r, r + 1).map(|a| a.count)).collect::<Result<_>>()?;
        t.eq("one point, U = all", annuli, point.counts);
        let rep = recurrence_counts(&corpus::three_cosets(), 0, &[0, 1], 1, 12, ln3)?;
        t.holds("3 cosets U={0,1} rmax=12", "infimum > 0", rep.infimum, rep.infimum > 0.0);
        let none = recurrence_counts(&corpus::three_cosets(), 0, &[], 1, 12, ln3)?;
        t.holds("U = empty", "all counts 0, infimum 0", none.infimum, none.counts.iter().all(|c| *c == BigUint::ZERO) && none.infimum == 0.0);
        Ok(())
    });
    t.run("pipeline", |t| {
        let kernel = SubgroupHandle::kernel_finite(corpus::a_parity())?;
        let c = divergence_pipeline(&kernel, &[w("aa")], 8, None)?;
        let positive = c.half_exponent_series > 0.0 && c.conjugation_sum > 0.0 && c.meeting_series > 0.0;
        t.holds("a-parity V={aa} R=8", "both hold, values positive", (c.first_holds, c.second_holds), c.first_holds && c.second_holds && positive);
        let c = divergence_pipeline(&SubgroupHandle::commutator(2), &[w("abAB")], 8, None)?;
        t.holds("[F2,F2] V={abAB} R=8", "both hold", (c.first_holds, c.second_holds), c.first_holds && c.second_holds);
        t.eq("a-parity V={a}", true, divergence_pipeline(&kernel, &[w("a")], 6, None)?.empty_chain);
        Ok(())
    });
    t.run("summed cocycle", |t| {
        let f2 = SubgroupHandle::full(2);
        let mut atlas = DensityAtlas::new();
        atlas.insert(&f2, "F2", DensityFamily::ExactFull { rank: 2 });
        let rep = summed_cocycle_check(&FiniteIrs::dirac(f2)?, &atlas, 1, 8, 0, ln3)?;
        t.eq("Dirac F2 exact density", true, rep.all_hold);
        let mu = irs_from_finite_index(&SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0)?)?;
        let mut atlas = DensityAtlas::new();
        for (i, m) in mu.members().iter().enumerate() {
            let base = boundary_project(&ws_measure(&m.handle, ln3 + 0.1, 8)?, 6)?;
            atlas.insert(&m.handle, format!("member {i}"), DensityFamily::Projected { base, dimension: ln3 });
        }
        let rep = summed_cocycle_check(&mu, &atlas, 1, 10, 1, ln3)?;
        t.eq("finite index k=1 rmax=10 margins nonnegative", true, rep.all_hold);
        Ok(())
    });
    t.checks
}

pub fn run(command: &'static str, modules: &[Module]) -> Result<Report> {
    let mut checks = Vec::new();
    for m in modules {
        checks.extend(match m {
            Module::Space => space_table(),
            Module::Subgroups => subgroups_table(),
            Module::Series => series_table(),
            Module::Boundary => boundary_table(),
            Module::Irs => irs_table(),
        });
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let mut csv = String::from("module,name,expected,actual,pass\n");
    for c in &checks {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        csv.push_str(&csv_row(&[c.module.to_string(), quote(&c.name), quote(&c.expected), quote(&c.actual), c.pass.to_string()]));
    }
    let report = Report::new(command, serde_json::json!({ "selftest": true, "failed": failed, "checks": checks }), csv)?;
    Ok(report.with_outcome(if failed == 0 { Outcome::Ok } else { Outcome::Violated }))
}
