//! Kernels of homomorphisms from `F_k` to a finite permutation group or to `Z^m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::automaton::WordAutomaton;
use crate::error::{invalid, Error, Result};
use crate::space::{Letter, Word};

/// Largest permutation group image we are willing to close up.
pub const MAX_IMAGE_ORDER: usize = 200_000;

/// The left regular action of the image group `phi(F_k)` on itself, built by
/// closing the generator images under composition. The kernel of `phi` is the
/// stabilizer of the identity element (index 0).
pub fn regular_action(images: &FiniteAction) -> Result<FiniteAction> {
    let n = images.size();
    let id: Vec<u32> = (0..n as u32).collect();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut table: Vec<Vec<usize>> = vec![Vec::new(); images.rank()];
    let mut i = 0;
    while i < elements.len() {
        for (g, row) in table.iter_mut().enumerate() {
            let img = &images.images()[g];
            let prod: Vec<u32> = elements[i].iter().map(|&p| img[p as usize] as u32).collect();
            let next = elements.len();
            let j = *index.entry(prod.clone()).or_insert(next);
            if j == next {
                if next >= MAX_IMAGE_ORDER {
                    return Err(Error::Unsupported(format!(
                        "image group has more than {MAX_IMAGE_ORDER} elements"
                    )));
                }
                elements.push(prod);
            }
            row.push(j);
        }
        i += 1;
    }
    FiniteAction::new(table)
}

/// Kernel of `F_k -> Z^m` given by integer images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianKernel {
    /// `images[g]` is the image of generator `g`.
    images: Vec<Vec<i64>>,
}

impl AbelianKernel {
    pub fn new(images: Vec<Vec<i64>>) -> Result<Self> {
        if images.is_empty() {
            return invalid("an abelian map needs at least one generator image");
        }
        let m = images[0].len();
        if images.iter().any(|v| v.len() != m) {
            return invalid("generator images have different dimensions");
        }
        Ok(AbelianKernel { images })
    }

    /// The commutator subgroup: kernel of the abelianization.
    pub fn abelianization(rank: usize) -> Self {
        let images = (0..rank).map(|g| (0..rank).map(|j| i64::from(g == j)).collect()).collect();
        AbelianKernel { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn dimension(&self) -> usize {
        self.images[0].len()
    }

    pub fn images(&self) -> &[Vec<i64>] {
        &self.images
    }

    pub fn image(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.dimension()];
        for &l in w.letters() {
            let sign = if l.is_inverse() { -1 } else { 1 };
            for (x, d) in v.iter_mut().zip(&self.images[l.generator()]) {
                *x += sign * d;
            }
        }
        v
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.image(w).iter().all(|&x| x == 0)
    }

    pub fn is_full(&self) -> bool {
        self.images.iter().flatten().all(|&x| x == 0)
    }

    /// Reduced row echelon form of the transposed image matrix. Two maps have
    /// the same kernel exactly when these agree: the kernel is the set of words
    /// whose exponent-sum vector lies in the null space of this matrix.
    pub fn kernel_key(&self) -> Vec<Vec<BigRational>> {
        let k = self.rank();
        let mut rows: Vec<Vec<BigRational>> = (0..self.dimension())
            .map(|j| (0..k).map(|g| BigRational::from_integer(BigInt::from(self.images[g][j]))).collect())
            .collect();
        let mut pivot_row = 0;
        for col in 0..k {
            let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(pivot_row, r);
            let p = rows[pivot_row][col].clone();
            for x in rows[pivot_row].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..rows.len() {
                if r != pivot_row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot = rows[pivot_row].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot) {
                        *x = &*x - &f * y;
                    }
                }
            }
            pivot_row += 1;
        }
        rows.truncate(pivot_row);
        rows
    }

    fn max_step(&self) -> i64 {
        self.images.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// Tracks the running image in `Z^m`; states that cannot return to zero in the
/// remaining steps are pruned, so only a box of side `O(n)` is ever visited.
pub struct AbelianAutomaton<'a> {
    kernel: &'a AbelianKernel,
    max_step: i64,
}

impl<'a> AbelianAutomaton<'a> {
    pub fn new(kernel: &'a AbelianKernel) -> Self {
        AbelianAutomaton { max_step: kernel.max_step(), kernel }
    }
}

impl WordAutomaton for AbelianAutomaton<'_> {
    type State = Vec<i64>;

    fn rank(&self) -> usize {
        self.kernel.rank()
    }

    fn start(&self) -> Vec<i64> {
        vec![0; self.kernel.dimension()]
    }

    fn step(&self, v: &Vec<i64>, l: Letter) -> Option<Vec<i64>> {
        let sign = if l.is_inverse() { -1 } else { 1 };
        Some(v.iter().zip(&self.kernel.images[l.generator()]).map(|(x, d)| x + sign * d).collect())
    }

    fn accepts(&self, v: &Vec<i64>) -> bool {
        v.iter().all(|&x| x == 0)
    }

    fn may_accept_within(&self, v: &Vec<i64>, steps: usize) -> bool {
        let reach = self.max_step.saturating_mul(steps as i64);
        v.iter().all(|x| x.abs() <= reach)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::automaton::{accepts_word, count_by_length};
    use crate::space::TreeModel;
    use num_bigint::BigUint;

    #[test]
    fn commutator_sphere_counts() {
        let k = AbelianKernel::abelianization(2);
        let counts = count_by_length(&AbelianAutomaton::new(&k), 6);
        let t = TreeModel::new(2).unwrap();
        for n in 0..=6 {
            let brute = t.sphere(n).iter().filter(|w| k.contains(w)).count();
            assert_eq!(counts[n], BigUint::from(brute), "n = {n}");
        }
        assert_eq!(counts[4], BigUint::from(8u32));
    }

    #[test]
    fn automaton_matches_image() {
        let k = AbelianKernel::new(vec![vec![1, 2], vec![-2, -4]]).unwrap();
        let aut = AbelianAutomaton::new(&k);
        for w in TreeModel::new(2).unwrap().ball(4) {
            assert_eq!(accepts_word(&aut, &w), k.contains(&w));
        }
    }

    #[test]
    fn kernel_key_ignores_scaling_and_basis() {
        let a = AbelianKernel::new(vec![vec![1, 0], vec![1, 0]]).unwrap();
        let b = AbelianKernel::new(vec![vec![3], vec![3]]).unwrap();
        let c = AbelianKernel::new(vec![vec![1], vec![2]]).unwrap();
        assert_eq!(a.kernel_key(), b.kernel_key());
        assert_ne!(a.kernel_key(), c.kernel_key());
        assert!(AbelianKernel::new(vec![vec![0], vec![0]]).unwrap().kernel_key().is_empty());
    }

    #[test]
    fn regular_action_of_s3() {
        let images = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let reg = regular_action(&images).unwrap();
        assert_eq!(reg.size(), 6);
        for w in TreeModel::new(2).unwrap().ball(4) {
            let trivial = (0..3).all(|p| images.act(&w, p) == p);
            assert_eq!(reg.act(&w, 0) == 0, trivial, "{w}");
        }
    }
}
