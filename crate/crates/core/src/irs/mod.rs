//! Finitely supported invariant random subgroups and the checks built on them.

pub mod exponent;
pub mod measure;
pub mod pipeline;
pub mod recurrence;

pub use exponent::{
    expected_critical_exponent, theorem_one_check, ExpectedExponent, HalfDimensionReport, MemberExponent,
    MemberVerdict, Verdict,
};
pub use measure::{irs_from_finite_index, irs_from_normal, FiniteIrs, IrsMember, MemberSummary, WEIGHT_TOL};
pub use pipeline::{
    divergence_pipeline, summed_cocycle_check, CocycleSumRow, DivergenceChain, InverseTrickRow, MemberCocycleSums,
    SummedCocycleReport,
};
pub use recurrence::{recurrence_counts, RecurrenceReport};
