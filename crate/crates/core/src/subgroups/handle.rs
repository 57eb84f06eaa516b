//! A single type for the four ways a subgroup of `F_k` can be given.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::action::{ActionTracker, FiniteAction};
use super::automaton::{count_by_length, enumerate_accepted, WordAutomaton};
use super::kernel::{regular_action, AbelianAutomaton, AbelianKernel};
use super::stallings::{GraphAutomaton, StallingsGraph};
use crate::error::{invalid, Result};
use crate::space::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupHandle {
    /// Finitely generated subgroup given by its folded core graph.
    Stallings(StallingsGraph),
    /// Stabilizer of `point` under a finite action.
    CosetStabilizer { action: FiniteAction, point: usize },
    /// Kernel of a map to a permutation group; `regular` is the left regular
    /// action of the image, whose identity element sits at index 0.
    KernelFinite { images: FiniteAction, regular: FiniteAction },
    /// Kernel of a map to `Z^m`.
    KernelAbelian(AbelianKernel),
}

/// Canonical form: two handles denote the same subgroup iff their keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupKey {
    Graph(StallingsGraph),
    Abelian { rank: usize, relations: Vec<Vec<BigRational>> },
}

impl SubgroupHandle {
    pub fn full(rank: usize) -> Self {
        SubgroupHandle::Stallings(StallingsGraph::full(rank))
    }

    pub fn trivial(rank: usize) -> Self {
        SubgroupHandle::Stallings(StallingsGraph::fold(rank, &[]).expect("empty generating set"))
    }

    pub fn from_generators(rank: usize, generators: &[Word]) -> Result<Self> {
        Ok(SubgroupHandle::Stallings(StallingsGraph::fold(rank, generators)?))
    }

    pub fn cyclic(rank: usize, h: &Word) -> Result<Self> {
        SubgroupHandle::from_generators(rank, std::slice::from_ref(h))
    }

    pub fn coset_stabilizer(action: FiniteAction, point: usize) -> Result<Self> {
        if point >= action.size() {
            return invalid(format!("point {point} outside an action on {} points", action.size()));
        }
        Ok(SubgroupHandle::CosetStabilizer { action, point })
    }

    pub fn kernel_finite(images: FiniteAction) -> Result<Self> {
        let regular = regular_action(&images)?;
        Ok(SubgroupHandle::KernelFinite { images, regular })
    }

    pub fn kernel_abelian(kernel: AbelianKernel) -> Self {
        SubgroupHandle::KernelAbelian(kernel)
    }

    /// The commutator subgroup `[F_k, F_k]`.
    pub fn commutator(rank: usize) -> Self {
        SubgroupHandle::KernelAbelian(AbelianKernel::abelianization(rank))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            SubgroupHandle::Stallings(_) => "stallings",
            SubgroupHandle::CosetStabilizer { .. } => "cosetStabilizer",
            SubgroupHandle::KernelFinite { .. } => "kernelFinite",
            SubgroupHandle::KernelAbelian(_) => "kernelAbelian",
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            SubgroupHandle::Stallings(g) => g.rank(),
            SubgroupHandle::CosetStabilizer { action, .. } => action.rank(),
            SubgroupHandle::KernelFinite { images, .. } => images.rank(),
            SubgroupHandle::KernelAbelian(k) => k.rank(),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        if !w.fits_rank(self.rank()) {
            return false;
        }
        match self {
            SubgroupHandle::Stallings(g) => g.contains(w),
            SubgroupHandle::CosetStabilizer { action, point } => action.act(w, *point) == *point,
            SubgroupHandle::KernelFinite { regular, .. } => regular.act(w, 0) == 0,
            SubgroupHandle::KernelAbelian(k) => k.contains(w),
        }
    }

    pub fn automaton(&self) -> MembershipAutomaton<'_> {
        match self {
            SubgroupHandle::Stallings(g) => MembershipAutomaton::Graph(GraphAutomaton::new(g)),
            SubgroupHandle::CosetStabilizer { action, point } => {
                MembershipAutomaton::Action(ActionTracker::new(action, *point, &[*point]))
            }
            SubgroupHandle::KernelFinite { regular, .. } => MembershipAutomaton::Action(ActionTracker::new(regular, 0, &[0])),
            SubgroupHandle::KernelAbelian(k) => MembershipAutomaton::Abelian(AbelianAutomaton::new(k)),
        }
    }

    /// Exact sphere counts `|{g in H : |g| = n}|` for `n = 0..=nmax`.
    pub fn sphere_counts(&self, nmax: usize) -> Vec<BigUint> {
        count_by_length(&self.automaton(), nmax)
    }

    pub fn sphere_count(&self, n: usize) -> BigUint {
        self.sphere_counts(n).pop().unwrap_or_default()
    }

    /// Ball counts `|{g in H : |g| <= r}|` for `r = 0..=rmax`.
    pub fn ball_counts(&self, rmax: usize) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.sphere_counts(rmax)
            .into_iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect()
    }

    /// All elements of length at most `r`, in shortlex order.
    pub fn elements_in_ball(&self, r: usize) -> Vec<Word> {
        enumerate_accepted(&self.automaton(), r)
    }

    pub fn key(&self) -> SubgroupKey {
        match self {
            SubgroupHandle::Stallings(g) => SubgroupKey::Graph(g.clone()),
            SubgroupHandle::CosetStabilizer { action, point } => {
                SubgroupKey::Graph(StallingsGraph::from_action(action, *point).expect("point checked at construction"))
            }
            SubgroupHandle::KernelFinite { regular, .. } => {
                SubgroupKey::Graph(StallingsGraph::from_action(regular, 0).expect("regular action has a point 0"))
            }
            SubgroupHandle::KernelAbelian(k) if k.is_full() => SubgroupKey::Graph(StallingsGraph::full(k.rank())),
            SubgroupHandle::KernelAbelian(k) => SubgroupKey::Abelian { rank: k.rank(), relations: k.kernel_key() },
        }
    }

    pub fn same_subgroup(&self, other: &SubgroupHandle) -> bool {
        self.key() == other.key()
    }

    /// Index in `F_k` when finite.
    pub fn index(&self) -> Option<usize> {
        match self {
            SubgroupHandle::Stallings(g) => g.index(),
            SubgroupHandle::CosetStabilizer { action, point } => Some(action.orbit(*point).len()),
            SubgroupHandle::KernelFinite { regular, .. } => Some(regular.size()),
            SubgroupHandle::KernelAbelian(k) => k.is_full().then_some(1),
        }
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: &Word) -> Result<SubgroupHandle> {
        if !g.fits_rank(self.rank()) {
            return invalid(format!("{g} does not fit rank {}", self.rank()));
        }
        Ok(match self {
            SubgroupHandle::Stallings(graph) => {
                let gens: Vec<Word> = graph.basis().iter().map(|b| b.conjugate_by(g)).collect();
                SubgroupHandle::Stallings(StallingsGraph::fold(graph.rank(), &gens)?)
            }
            SubgroupHandle::CosetStabilizer { action, point } => {
                SubgroupHandle::CosetStabilizer { action: action.clone(), point: action.act(g, *point) }
            }
            SubgroupHandle::KernelFinite { .. } | SubgroupHandle::KernelAbelian(_) => self.clone(),
        })
    }

    /// Normal iff conjugating by each generator gives back the same subgroup.
    pub fn is_normal(&self) -> bool {
        match self {
            SubgroupHandle::KernelFinite { .. } | SubgroupHandle::KernelAbelian(_) => true,
            _ => {
                let key = self.key();
                Letter::alphabet(self.rank())
                    .filter(|l| !l.is_inverse())
                    .all(|l| self.conjugate(&Word::from(l)).map(|c| c.key() == key).unwrap_or(false))
            }
        }
    }

    /// Free basis for finitely generated variants; `None` for abelian kernels
    /// of infinite rank.
    pub fn generators(&self) -> Option<Vec<Word>> {
        match self {
            SubgroupHandle::KernelAbelian(k) if !k.is_full() => None,
            SubgroupHandle::KernelAbelian(k) => Some(StallingsGraph::full(k.rank()).basis()),
            _ => match self.key() {
                SubgroupKey::Graph(g) => Some(g.basis()),
                SubgroupKey::Abelian { .. } => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MembershipState {
    Point(usize),
    Vector(Vec<i64>),
}

pub enum MembershipAutomaton<'a> {
    Graph(GraphAutomaton<'a>),
    Action(ActionTracker<'a>),
    Abelian(AbelianAutomaton<'a>),
}

impl WordAutomaton for MembershipAutomaton<'_> {
    type State = MembershipState;

    fn rank(&self) -> usize {
        match self {
            MembershipAutomaton::Graph(a) => a.rank(),
            MembershipAutomaton::Action(a) => a.rank(),
            MembershipAutomaton::Abelian(a) => a.rank(),
        }
    }

    fn start(&self) -> MembershipState {
        match self {
            MembershipAutomaton::Graph(a) => MembershipState::Point(a.start()),
            MembershipAutomaton::Action(a) => MembershipState::Point(a.start()),
            MembershipAutomaton::Abelian(a) => MembershipState::Vector(a.start()),
        }
    }

    fn step(&self, s: &MembershipState, l: Letter) -> Option<MembershipState> {
        match (self, s) {
            (MembershipAutomaton::Graph(a), MembershipState::Point(p)) => a.step(p, l).map(MembershipState::Point),
            (MembershipAutomaton::Action(a), MembershipState::Point(p)) => a.step(p, l).map(MembershipState::Point),
            (MembershipAutomaton::Abelian(a), MembershipState::Vector(v)) => a.step(v, l).map(MembershipState::Vector),
            _ => unreachable!("state from a different automaton"),
        }
    }

    fn accepts(&self, s: &MembershipState) -> bool {
        match (self, s) {
            (MembershipAutomaton::Graph(a), MembershipState::Point(p)) => a.accepts(p),
            (MembershipAutomaton::Action(a), MembershipState::Point(p)) => a.accepts(p),
            (MembershipAutomaton::Abelian(a), MembershipState::Vector(v)) => a.accepts(v),
            _ => unreachable!("state from a different automaton"),
        }
    }

    fn may_accept_within(&self, s: &MembershipState, steps: usize) -> bool {
        match (self, s) {
            (MembershipAutomaton::Graph(a), MembershipState::Point(p)) => a.may_accept_within(p, steps),
            (MembershipAutomaton::Abelian(a), MembershipState::Vector(v)) => a.may_accept_within(v, steps),
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn contains_examples() {
        let ab = SubgroupHandle::commutator(2);
        assert!(ab.contains(&w("abAB")));
        assert!(!ab.contains(&w("a")));
        let h = SubgroupHandle::from_generators(2, &[w("aa"), w("ab")]).unwrap();
        assert!(h.contains(&w("aaab")));
        assert!(!h.contains(&w("a")));
    }

    #[test]
    fn sphere_count_examples() {
        assert_eq!(SubgroupHandle::full(2).sphere_count(2), BigUint::from(12u32));
        assert_eq!(SubgroupHandle::commutator(2).sphere_count(4), BigUint::from(8u32));
        assert_eq!(SubgroupHandle::cyclic(2, &w("a")).unwrap().sphere_count(5), BigUint::from(2u32));
    }

    #[test]
    fn conjugation_examples() {
        let a = SubgroupHandle::cyclic(2, &w("a")).unwrap();
        let c = a.conjugate(&w("b")).unwrap();
        assert!(c.same_subgroup(&SubgroupHandle::cyclic(2, &w("baB")).unwrap()));
        assert!(!a.is_normal());
        let n = SubgroupHandle::commutator(2);
        assert_eq!(n.conjugate(&w("ab")).unwrap().key(), n.key());
        let act = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let stab = SubgroupHandle::coset_stabilizer(act.clone(), 0).unwrap();
        let g = w("aB");
        let moved = SubgroupHandle::coset_stabilizer(act.clone(), act.act(&g, 0)).unwrap();
        assert!(stab.conjugate(&g).unwrap().same_subgroup(&moved));
    }

    #[test]
    fn keys_identify_equal_subgroups() {
        // Index-2 subgroup of words with even length, three ways.
        let parity = FiniteAction::new(vec![vec![1, 0], vec![1, 0]]).unwrap();
        let stab = SubgroupHandle::coset_stabilizer(parity.clone(), 0).unwrap();
        let ker = SubgroupHandle::kernel_finite(parity).unwrap();
        let gens = SubgroupHandle::from_generators(2, &[w("aa"), w("ab"), w("aB")]).unwrap();
        assert_eq!(stab.key(), ker.key());
        assert_eq!(stab.key(), gens.key());
        assert_eq!(stab.index(), Some(2));
        assert!(stab.is_normal() && gens.is_normal());
        let zero = SubgroupHandle::kernel_abelian(AbelianKernel::new(vec![vec![0], vec![0]]).unwrap());
        assert_eq!(zero.key(), SubgroupHandle::full(2).key());
    }
}
