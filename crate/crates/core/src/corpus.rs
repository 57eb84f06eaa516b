//! The standing test corpus: fixed subgroups, finite actions and a seeded
//! family of `(h, K)` pairs used by the property suites, the acceptance
//! target and the CLI self-tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::{Letter, Word};
use crate::subgroups::{AbelianKernel, FiniteAction, SubgroupHandle};

pub const CORPUS_SEED: u64 = 0x5eed_2024;

fn w(s: &str) -> Word {
    Word::parse(s).expect("corpus words are valid")
}

/// `a -> (0 1 2)`, `b -> (0 1)`: the transitive action of `F_2` on three cosets.
pub fn three_cosets() -> FiniteAction {
    FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).expect("valid permutations")
}

/// `a -> (0 1)`, `b -> id`.
pub fn a_parity() -> FiniteAction {
    FiniteAction::new(vec![vec![1, 0], vec![0, 1]]).expect("valid permutations")
}

pub fn actions() -> Vec<(&'static str, FiniteAction)> {
    vec![
        ("point", FiniteAction::trivial(2)),
        ("a-parity", a_parity()),
        ("three-cosets", three_cosets()),
        ("word-length-parity", FiniteAction::new(vec![vec![1, 0], vec![1, 0]]).expect("valid permutations")),
        (
            "four-points",
            FiniteAction::new(vec![vec![1, 2, 3, 0], vec![0, 2, 1, 3]]).expect("valid permutations"),
        ),
    ]
}

/// Named subgroups covering every handle variant.
pub fn subgroups() -> Vec<(&'static str, SubgroupHandle)> {
    let abelian = |images: Vec<Vec<i64>>| SubgroupHandle::kernel_abelian(AbelianKernel::new(images).expect("valid images"));
    vec![
        ("full-rank-2", SubgroupHandle::full(2)),
        ("full-rank-3", SubgroupHandle::full(3)),
        ("cyclic-a", SubgroupHandle::cyclic(2, &w("a")).expect("valid")),
        ("cyclic-ab", SubgroupHandle::cyclic(2, &w("ab")).expect("valid")),
        ("aa-ab", SubgroupHandle::from_generators(2, &[w("aa"), w("ab")]).expect("valid")),
        ("conjugated-lollipop", SubgroupHandle::from_generators(2, &[w("bAB"), w("bb")]).expect("valid")),
        ("stab-three-cosets", SubgroupHandle::coset_stabilizer(three_cosets(), 0).expect("valid")),
        ("stab-four-points", SubgroupHandle::coset_stabilizer(actions()[4].1.clone(), 1).expect("valid")),
        ("kernel-a-parity", SubgroupHandle::kernel_finite(a_parity()).expect("valid")),
        ("kernel-s3", SubgroupHandle::kernel_finite(three_cosets()).expect("valid")),
        ("commutator-rank-2", SubgroupHandle::commutator(2)),
        ("commutator-rank-3", SubgroupHandle::commutator(3)),
        ("kernel-a-plus-b", abelian(vec![vec![1], vec![1]])),
        ("kernel-b-exponent", abelian(vec![vec![0], vec![1]])),
    ]
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, min: usize, max: usize) -> Word {
    loop {
        let len = rng.gen_range(min..=max);
        let w = Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen())));
        if w.len() >= min {
            return w;
        }
    }
}

/// A hyperbolic element `h` of `F_2` with a finite set `K` of nontrivial
/// elements containing a conjugate of `h`.
#[derive(Debug, Clone)]
pub struct ConjugacyCase {
    pub h: Word,
    pub k: Vec<Word>,
}

/// Fifty seeded cases. `h` is a conjugate of a random member of `K` by a word
/// of length at most 3, so `{g : g h g^-1 in K}` meets every ball of radius 3.
pub fn conjugacy_cases() -> Vec<ConjugacyCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..50)
        .map(|_| {
            let size = rng.gen_range(1..=3);
            let k: Vec<Word> = (0..size).map(|_| random_word(&mut rng, 2, 1, 4)).collect();
            let target = &k[rng.gen_range(0..size)];
            let g = random_word(&mut rng, 2, 0, 3);
            ConjugacyCase { h: target.conjugate_by(&g.inverse()), k }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_well_formed() {
        let a = conjugacy_cases();
        let b = conjugacy_cases();
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.h, y.h);
            assert_eq!(x.k, y.k);
            assert!(!x.h.is_empty());
            assert!(x.k.iter().all(|k| !k.is_empty()));
        }
        assert!(subgroups().iter().all(|(_, h)| h.contains(&Word::identity())));
    }
}
