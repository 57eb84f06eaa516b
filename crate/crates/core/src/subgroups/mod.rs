//! Subgroups of `F_k`: representations, membership and exact orbit counting.

pub mod action;
pub mod automaton;
pub mod counting;
pub mod description;
pub mod handle;
pub mod kernel;
pub mod stallings;

pub use action::{ActionTracker, FiniteAction};
pub use automaton::{accepts_word, count_by_length, enumerate_accepted, AllWords, Product, WordAutomaton};
pub use counting::{annulus_count, annulus_from_spheres, coornaert_ratio, ln_big, AnnulusCount, AnnulusRatioRow, AnnulusRatioTable};
pub use description::SubgroupDescription;
pub use handle::{MembershipAutomaton, MembershipState, SubgroupHandle, SubgroupKey};
pub use kernel::{regular_action, AbelianKernel};
pub use stallings::StallingsGraph;
