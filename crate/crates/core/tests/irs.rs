use hypercrit::boundary::{boundary_project, ws_measure, DensityAtlas, DensityFamily};
use hypercrit::corpus;
use hypercrit::irs::*;
use hypercrit::space::{Letter, TreeModel, Word};
use hypercrit::subgroups::SubgroupHandle;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn named(name: &str) -> SubgroupHandle {
    corpus::subgroups().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn corpus_irs() -> Vec<(&'static str, FiniteIrs)> {
    let mut out = Vec::new();
    for name in ["full-rank-2", "full-rank-3", "stab-three-cosets", "stab-four-points", "kernel-a-parity", "kernel-s3"] {
        out.push((name, irs_from_finite_index(&named(name)).unwrap()));
    }
    for name in ["commutator-rank-2", "kernel-a-plus-b", "kernel-b-exponent"] {
        out.push((name, irs_from_normal(&named(name)).unwrap()));
    }
    out
}

#[test]
fn constructed_measures_are_conjugation_closed() {
    for (name, mu) in corpus_irs() {
        let total: f64 = mu.members().iter().map(|m| m.weight).sum();
        assert!((total - 1.0).abs() < 1e-12, "{name}");
        for m in mu.members() {
            for g in Letter::alphabet(mu.rank()) {
                let c = m.handle.conjugate(&Word::from(g)).unwrap();
                let j = mu.position(&c).unwrap_or_else(|| panic!("{name}: conjugate left the support"));
                assert!((mu.members()[j].weight - m.weight).abs() < 1e-12);
            }
        }
    }
    // Stabilizer of a point of a transitive action on n points has n conjugates
    // when no other point has the same stabilizer.
    assert_eq!(irs_from_finite_index(&named("stab-four-points")).unwrap().len(), 4);
}

#[test]
fn expected_exponent_is_conjugation_invariant() {
    for (name, mu) in corpus_irs().into_iter().filter(|(_, mu)| mu.rank() == 2) {
        let base: Vec<Vec<BigUint>> = {
            let mut v: Vec<_> = mu.members().iter().map(|m| m.handle.sphere_counts(10)).collect();
            v.sort();
            v
        };
        let e0 = expected_critical_exponent(&mu, 10).unwrap().value;
        for g in ["b", "ab", "Aba"] {
            let moved = mu.conjugated(&Word::parse(g).unwrap()).unwrap();
            let mut counts: Vec<_> = moved.members().iter().map(|m| m.handle.sphere_counts(10)).collect();
            counts.sort();
            assert_eq!(counts, base, "{name} by {g}");
            let e = expected_critical_exponent(&moved, 10).unwrap().value;
            assert!((e - e0).abs() < 1e-12, "{name} by {g}");
        }
    }
}

#[test]
fn recurrence_counts_match_ball_tracing() {
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::CORPUS_SEED);
    let ball = TreeModel::new(2).unwrap().ball(9);
    for (name, action) in corpus::actions() {
        for x in 0..action.size() {
            let targets: Vec<usize> = (0..action.size()).filter(|_| rng.gen_bool(0.5)).collect();
            let rep = recurrence_counts(&action, x, &targets, 1, 8, 3f64.ln()).unwrap();
            for r in 0..=8 {
                let brute = ball
                    .iter()
                    .filter(|g| (r..=r + 1).contains(&g.len()) && targets.contains(&action.act(g, x)))
                    .count();
                assert_eq!(rep.counts[r], BigUint::from(brute), "{name} x={x} r={r}");
            }
        }
    }
}

#[test]
fn full_exponent_members_pass_and_chains_hold() {
    for (name, mu) in corpus_irs().into_iter().filter(|(n, _)| !n.starts_with("commutator") && !n.starts_with("kernel-a-plus") && !n.starts_with("kernel-b")) {
        let report = theorem_one_check(&mu, 12).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{name}");
        for m in mu.members().iter().filter(|m| m.handle.rank() == 2) {
            let v: Vec<Word> = m.handle.elements_in_ball(3).into_iter().filter(|w| !w.is_empty()).take(2).collect();
            for r in [2, 4, 6, 8] {
                let c = divergence_pipeline(&m.handle, &v, r, None).unwrap();
                assert!(c.first_holds && c.second_holds && !c.empty_chain, "{name} R={r}");
                assert!(c.half_exponent_series * c.beta >= c.shortest_conjugator_sum * (1.0 - 1e-12));
                assert!(c.shortest_conjugator_sum * c.alpha >= c.conjugation_sum * (1.0 - 1e-12));
            }
        }
    }
}

#[test]
fn finite_index_cocycle_sums_hold() {
    let mu = irs_from_finite_index(&named("stab-three-cosets")).unwrap();
    let ln3 = 3f64.ln();
    let mut atlas = DensityAtlas::new();
    for (i, m) in mu.members().iter().enumerate() {
        let base = boundary_project(&ws_measure(&m.handle, ln3 + 0.1, 8).unwrap(), 6).unwrap();
        atlas.insert(&m.handle, format!("member {i}"), DensityFamily::Projected { base, dimension: ln3 });
    }
    let rep = summed_cocycle_check(&mu, &atlas, 1, 10, 1, ln3).unwrap();
    for m in &rep.members {
        for row in &m.rows {
            assert!(row.log_margin >= 0.0, "member {} r={}: {}", m.index, row.radius, row.log_margin);
        }
    }
    for row in &rep.inverse_trick {
        assert!(row.log_margin >= 0.0, "r={}: {}", row.radius, row.log_margin);
    }
    assert!(rep.all_hold);
}
