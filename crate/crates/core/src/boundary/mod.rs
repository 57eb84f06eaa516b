//! The boundary of the Cayley tree: cylinders, shadows, measures and densities.
//!
//! Plane-model shadows are not implemented.

pub mod checks;
pub mod cylinder;
pub mod measure;

pub use checks::{
    busemann_shadow_bounds_check, busemann_shadow_random_check, full_group_cover_multiplicity, random_end_in, random_word, shadow_cover_check,
    BusemannShadowReport, ShadowCover,
};
pub use cylinder::{extensions, in_shadow, shadow, successors, CylinderSet, Shadow};
pub use measure::{
    boundary_project, cocycle_residuals, exact_conformal_density, exact_shadow_ratios, shadow_lemma_check, uniform_mass, ws_ladder,
    ws_measure, CocycleReport, CylinderMeasure, DensityAtlas, DensityFamily, LadderReport, LadderRung, OrbitMeasure,
    ShadowLemmaReport, ShadowRatioRow, EPSILON_LADDER,
};
