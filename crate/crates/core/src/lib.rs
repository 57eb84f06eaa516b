//! Critical exponents, Poincaré series, shadows and invariant random subgroups
//! for free groups acting on their Cayley trees, with a small hyperbolic-plane
//! model for comparison.

pub mod boundary;
pub mod corpus;
pub mod error;
pub mod irs;
pub mod serde_big;
pub mod series;
pub mod space;
pub mod subgroups;

pub use error::{Error, Result};
