use std::collections::HashSet;

use hypercrit::corpus;
use hypercrit::space::{Letter, TreeModel, Word};
use hypercrit::subgroups::{annulus_count, SubgroupHandle};
use num_bigint::BigUint;
use proptest::prelude::*;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// Every product of at most `factors` generators and inverses.
fn products(gens: &[Word], factors: usize) -> HashSet<Word> {
    let sym: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut all: HashSet<Word> = HashSet::from([Word::identity()]);
    let mut frontier = vec![Word::identity()];
    for _ in 0..factors {
        let mut next = Vec::new();
        for f in &frontier {
            for s in &sym {
                let p = f.mul(s);
                if all.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Membership computed straight from the defining data, independent of automata.
fn direct_contains(h: &SubgroupHandle, x: &Word) -> bool {
    match h {
        SubgroupHandle::Stallings(_) => h.contains(x),
        SubgroupHandle::CosetStabilizer { action, point } => action.act(x, *point) == *point,
        SubgroupHandle::KernelFinite { images, .. } => (0..images.size()).all(|p| images.act(x, p) == p),
        SubgroupHandle::KernelAbelian(k) => k.image(x).iter().all(|&v| v == 0),
    }
}

#[test]
fn sphere_counts_match_filtered_ambient_spheres() {
    for (name, h) in corpus::subgroups() {
        let t = TreeModel::new(h.rank()).unwrap();
        let nmax = if h.rank() == 2 { 8 } else { 6 };
        let dp = h.sphere_counts(nmax);
        for n in 0..=nmax {
            let brute = t.sphere(n).iter().filter(|x| direct_contains(&h, x)).count();
            assert_eq!(dp[n], BigUint::from(brute), "{name}, n = {n}");
        }
    }
}

#[test]
fn enumerated_elements_match_counts() {
    for (name, h) in corpus::subgroups() {
        let els = h.elements_in_ball(6);
        let counts = h.sphere_counts(6);
        for n in 0..=6 {
            assert_eq!(BigUint::from(els.iter().filter(|x| x.len() == n).count()), counts[n], "{name}");
        }
        assert!(els.iter().all(|x| h.contains(x)));
    }
}

#[test]
fn full_group_sphere_formula() {
    for k in 2..=4usize {
        let counts = SubgroupHandle::full(k).sphere_counts(30);
        for n in 1..=30u32 {
            let expected = BigUint::from(2 * k) * BigUint::from(2 * k - 1).pow(n - 1);
            assert_eq!(counts[n as usize], expected);
        }
    }
}

#[test]
fn annulus_is_sum_of_spheres() {
    for (name, h) in corpus::subgroups() {
        let s = h.sphere_counts(8);
        for r1 in 0..=8 {
            for r2 in r1..=8 {
                let sum: BigUint = s[r1..=r2].iter().sum();
                assert_eq!(annulus_count(&h, r1, r2).unwrap().count, sum, "{name}");
            }
        }
    }
}

#[test]
fn conjugating_normal_subgroups_preserves_counts() {
    let t = TreeModel::new(2).unwrap();
    for (name, h) in corpus::subgroups() {
        if h.rank() != 2 || !h.is_normal() {
            continue;
        }
        let base = h.sphere_counts(12);
        for g in t.ball(2) {
            let c = h.conjugate(&g).unwrap();
            assert_eq!(c.sphere_counts(12), base, "{name} conjugated by {g}");
        }
    }
    // Stallings route: refold a conjugated basis of a normal finite-index subgroup.
    let even = SubgroupHandle::from_generators(2, &[w("aa"), w("ab"), w("aB")]).unwrap();
    assert!(even.is_normal());
    let base = even.sphere_counts(12);
    for g in t.ball(3) {
        assert_eq!(even.conjugate(&g).unwrap().sphere_counts(12), base);
    }
}

#[test]
fn conjugacy_orbit_of_finite_index_subgroup() {
    let act = corpus::three_cosets();
    let h = SubgroupHandle::coset_stabilizer(act.clone(), 0).unwrap();
    let mut keys = Vec::new();
    let mut index_sum = 0;
    for g in TreeModel::new(2).unwrap().ball(3) {
        let c = h.conjugate(&g).unwrap();
        let key = c.key();
        if !keys.contains(&key) {
            index_sum += c.index().unwrap();
            keys.push(key);
        }
    }
    assert_eq!(keys.len(), 3);
    assert_eq!(index_sum, h.index().unwrap() * keys.len());
    // Distinct conjugates are exactly the point stabilizers.
    for p in 0..3 {
        let s = SubgroupHandle::coset_stabilizer(act.clone(), p).unwrap();
        assert!(keys.contains(&s.key()));
    }
}

#[test]
fn normality_of_corpus_members() {
    let normal: Vec<&str> = corpus::subgroups().into_iter().filter(|(_, h)| h.is_normal()).map(|(n, _)| n).collect();
    for expected in ["full-rank-2", "kernel-a-parity", "kernel-s3", "commutator-rank-2", "kernel-a-plus-b"] {
        assert!(normal.contains(&expected), "{expected}");
    }
    for not_normal in ["cyclic-a", "aa-ab", "stab-three-cosets"] {
        assert!(!normal.contains(&not_normal), "{not_normal}");
    }
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..2, any::<bool>()), 0..=max)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stallings_membership_matches_products(x in word(10)) {
        thread_local! {
            static ORACLES: Vec<(SubgroupHandle, HashSet<Word>)> = [
                vec![w("aa"), w("ab")],
                vec![w("bAB"), w("bb")],
                vec![w("ab")],
            ]
            .into_iter()
            .map(|gens| (SubgroupHandle::from_generators(2, &gens).unwrap(), products(&gens, 12)))
            .collect();
        }
        ORACLES.with(|oracles| {
            for (h, prods) in oracles {
                // Elements of length <= 10 need at most 10 factors here, well inside 12.
                prop_assert_eq!(h.contains(&x), prods.contains(&x), "{}", x);
            }
            Ok(())
        })?;
    }

    #[test]
    fn kernel_membership_matches_images(x in word(10)) {
        for (name, h) in corpus::subgroups() {
            if matches!(h, SubgroupHandle::Stallings(_)) || h.rank() != 2 {
                continue;
            }
            prop_assert_eq!(h.contains(&x), direct_contains(&h, &x), "{} {}", name, x);
        }
    }
}
