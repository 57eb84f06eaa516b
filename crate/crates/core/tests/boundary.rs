use hypercrit::boundary::*;
use hypercrit::corpus;
use hypercrit::space::{tree_dist, TreeEnd, TreeModel, Word};
use hypercrit::subgroups::SubgroupHandle;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// Distance from `y` to the ray from `x` to `xi`, by walking the ray.
fn ray_distance(x: &Word, y: &Word, xi: &TreeEnd, steps: usize) -> usize {
    // Vertices of the ray: x, then x^-1 xi truncated, translated back by x.
    let rel = xi.translate(&x.inverse());
    (0..=steps).map(|n| tree_dist(&x.mul(&rel.truncate(n)), y)).min().unwrap()
}

#[test]
fn shadows_match_ray_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::CORPUS_SEED);
    for _ in 0..400 {
        let (nx, ny) = (rng.gen_range(0..4), rng.gen_range(0..5));
        let x = random_word(&mut rng, 2, nx);
        let y = random_word(&mut rng, 2, ny);
        let r = rng.gen_range(0..3);
        let sh = shadow(2, &x, &y, r).unwrap();
        for _ in 0..10 {
            let nz = rng.gen_range(1..8);
            let v = random_word(&mut rng, 2, nz);
            let xi = TreeEnd::new(v.prefix(nz - 1), Word::from(v.last().unwrap())).unwrap();
            let walked = ray_distance(&x, &y, &xi, 20) <= r;
            assert_eq!(sh.cylinders.contains_end(&xi), walked, "x={x} y={y} R={r} xi={xi}");
            assert_eq!(in_shadow(&x, &y, r, &xi), walked);
        }
    }
}

#[test]
fn shadow_of_ab_at_radius_one_by_enumeration() {
    // Every depth-5 ray through a passes within 1 of ab; no other ray does.
    let sh = shadow(2, &Word::identity(), &w("ab"), 1).unwrap();
    for v in TreeModel::new(2).unwrap().sphere(5) {
        let near = (0..=5).any(|n| tree_dist(&v.prefix(n), &w("ab")) <= 1);
        assert_eq!(sh.cylinders.contains_cylinder(&v), near, "{v}");
    }
}

#[test]
fn set_operations_agree_with_pointwise_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::CORPUS_SEED + 1);
    let mut checked = 0;
    while checked < 500 {
        let mut sets = Vec::new();
        for _ in 0..2 {
            let (nx, ny) = (rng.gen_range(0..3), rng.gen_range(1..5));
            let x = random_word(&mut rng, 2, nx);
            let y = random_word(&mut rng, 2, ny);
            sets.push(shadow(2, &x, &y, rng.gen_range(0..2)).unwrap().cylinders);
        }
        let (a, b) = (&sets[0], &sets[1]);
        let union = a.union(b);
        let inter = a.intersection(b);
        let full = CylinderSet::full(2);
        let Some(xi) = random_end_in(&mut rng, &full, 6) else { continue };
        assert_eq!(union.contains_end(&xi), a.contains_end(&xi) || b.contains_end(&xi));
        assert_eq!(inter.contains_end(&xi), a.contains_end(&xi) && b.contains_end(&xi));
        checked += 1;
    }
}

/// Number of annulus elements whose shadow contains the straight end through `v`.
fn pointwise_multiplicity(ann: &[Word], v: &Word, radius: usize) -> usize {
    let xi = TreeEnd::new(v.prefix(v.len() - 1), Word::from(v.last().unwrap())).unwrap();
    ann.iter().filter(|g| ray_distance(&Word::identity(), g, &xi, v.len()) <= radius).count()
}

#[test]
fn cover_multiplicities_match_pointwise_counts() {
    for (k, radius, r) in [(0, 0, 3), (1, 1, 4)] {
        let h = SubgroupHandle::full(2);
        let report = shadow_cover_check(&h, k, radius, r).unwrap();
        let ann: Vec<Word> = h.elements_in_ball(r + k).into_iter().filter(|g| g.len() >= r).collect();
        let counts: Vec<usize> =
            TreeModel::new(2).unwrap().sphere(report.depth).iter().map(|v| pointwise_multiplicity(&ann, v, radius)).collect();
        assert!(report.covered);
        assert_eq!(report.min_multiplicity, *counts.iter().min().unwrap());
        assert_eq!(report.max_multiplicity, *counts.iter().max().unwrap());
    }
    // Index 2: depth 10 has 78732 cylinders, so the oracle samples them.
    let h = corpus::subgroups().into_iter().find(|(n, _)| *n == "kernel-a-parity").unwrap().1;
    let report = shadow_cover_check(&h, 2, 2, 5).unwrap();
    assert!(report.covered);
    let ann: Vec<Word> = h.elements_in_ball(7).into_iter().filter(|g| g.len() >= 5).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::CORPUS_SEED + 3);
    for _ in 0..300 {
        let v = random_word(&mut rng, 2, report.depth);
        let m = pointwise_multiplicity(&ann, &v, 2);
        assert!(m >= 1 && (report.min_multiplicity..=report.max_multiplicity).contains(&m), "{v}: {m}");
    }
}

#[test]
fn busemann_bounds_hold_on_small_pairs() {
    let ball = TreeModel::new(2).unwrap().ball(2);
    for x in &ball {
        for y in &ball {
            if x == y {
                continue;
            }
            for r in 0..3 {
                let rep = busemann_shadow_bounds_check(2, x, y, r, 4).unwrap();
                assert_eq!(rep.violations, 0, "x={x} y={y} R={r}");
                assert_eq!(rep.max_busemann, Some(tree_dist(x, y) as i64));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::CORPUS_SEED + 2);
    let (n, bad) = busemann_shadow_random_check(&mut rng, 3, 2000, 6, 3).unwrap();
    assert_eq!((n, bad), (2000, 0));
}

fn q_pow(e: i64) -> BigRational {
    let p = BigRational::from_integer(num_traits::pow(BigInt::from(3), e.unsigned_abs() as usize));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

#[test]
fn exact_density_is_conformal() {
    let o = exact_conformal_density(2, &Word::identity(), 6).unwrap();
    for x in TreeModel::new(2).unwrap().ball(4) {
        let nu_x = exact_conformal_density(2, &x, 6).unwrap();
        for stem in nu_x.stems() {
            // Refine to depth 6, where the derivative 3^{beta(o,x)} is constant on each cylinder.
            let mut sum = BigRational::zero();
            for leaf in extensions(2, &stem, 6) {
                let beta = 2 * leaf.common_prefix_len(&x) as i64 - x.len() as i64;
                sum += o.exact_mass(&leaf).unwrap() * q_pow(beta);
            }
            assert_eq!(nu_x.exact_mass(&stem).unwrap(), sum, "x={x} stem={stem}");
        }
        assert_eq!(nu_x.exact_mass(&Word::identity()).unwrap(), BigRational::one());
    }
}

#[test]
fn exact_density_is_equivariant() {
    let family = DensityFamily::ExactFull { rank: 2 };
    let exact = |x: &Word, set: &CylinderSet| -> BigRational {
        set.stems().iter().map(|s| family.exact_mass_at(x, s).unwrap()).sum()
    };
    let ball = TreeModel::new(2).unwrap().ball(4);
    let points = TreeModel::new(2).unwrap().ball(2);
    for g in &ball {
        for x in &points {
            for len in 1..=3 {
                for stem in extensions(2, &Word::identity(), len) {
                    let a = CylinderSet::cylinder(2, &stem).unwrap();
                    // (g_* nu_{g^-1 x})(A) = nu_{g^-1 x}(g^-1 A).
                    let lhs = exact(&g.inverse().mul(x), &a.translate(&g.inverse()));
                    assert_eq!(lhs, exact(x, &a), "g={g} x={x} A={stem}");
                }
            }
        }
    }
}

#[test]
fn projected_measures_are_additive() {
    for (name, h) in corpus::subgroups().into_iter().filter(|(_, h)| h.rank() == 2) {
        let m = ws_measure(&h, 1.2, 6).unwrap();
        assert!((m.total_mass - 1.0).abs() < 1e-12, "{name}");
        let p = boundary_project(&m, 4).unwrap();
        assert!(p.additivity_defect() < 1e-9, "{name}");
        assert!((p.total_mass() - 1.0).abs() < 1e-9, "{name}");
    }
}

#[test]
fn full_group_shadow_spread_is_stable() {
    let f2 = SubgroupHandle::full(2);
    let fam = DensityFamily::ExactFull { rank: 2 };
    let ln3 = 3f64.ln();
    for r in 0..3 {
        let six = shadow_lemma_check(&f2, &fam, ln3, r, 6).unwrap();
        let ten = shadow_lemma_check(&f2, &fam, ln3, r, 10).unwrap();
        assert!((six.spread - ten.spread).abs() < 1e-9, "R={r}");
    }
}

#[test]
fn full_group_cocycle_is_trivial() {
    let f2 = SubgroupHandle::full(2);
    let mut atlas = DensityAtlas::new();
    atlas.insert(&f2, "F2", DensityFamily::ExactFull { rank: 2 });
    let rep = cocycle_residuals(&atlas, &f2, 3).unwrap();
    assert!(rep.max_residual < 1e-12);
    assert!((rep.min_cocycle - 1.0).abs() < 1e-12 && (rep.max_cocycle - 1.0).abs() < 1e-12);
}

#[test]
fn normal_subgroup_cocycle_is_reported() {
    let h = corpus::subgroups().into_iter().find(|(n, _)| *n == "kernel-a-parity").unwrap().1;
    let delta = 3f64.ln();
    let base = boundary_project(&ws_measure(&h, delta + 0.1, 8).unwrap(), 4).unwrap();
    let mut atlas = DensityAtlas::new();
    atlas.insert(&h, "kernel", DensityFamily::Projected { base, dimension: delta });
    let rep = cocycle_residuals(&atlas, &h, 2).unwrap();
    assert!(rep.max_residual.is_finite());
    assert!(rep.implied_distortion >= 1.0);
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(stems in prop::collection::vec("[aAbB]{1,4}", 1..8)) {
        let words: Vec<Word> = stems.iter().map(|s| w(s)).filter(|w| !w.is_empty()).collect();
        let set = CylinderSet::from_stems(2, words).unwrap();
        let again = CylinderSet::from_stems(2, set.stems().to_vec()).unwrap();
        prop_assert_eq!(&again, &set);
        let refined = CylinderSet::from_stems(2, set.refine_to(set.max_depth() + 1)).unwrap();
        prop_assert_eq!(&refined, &set);
    }
}
