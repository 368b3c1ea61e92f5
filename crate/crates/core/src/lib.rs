//! Exact computations around the pre-Lie operad.
//!
//! * [`trees`]: labeled rooted trees, grafting, forest actions.
//! * [`symfunc`]: symmetric functions in the power-sum basis, plethysm, characters.
//! * [`smodule`]: cycle indices of the S-modules involved and the identities between them.
//! * [`homology`]: the bicomplex `(S∘W) ⊗ (Λ∘W)`, its differentials and homology.
//! * [`linalg`]: exact sparse rank.
//! * [`series`]: exponential generating series in `x` with coefficients in `Q[s, t]`.
//! * [`verify`]: the full verification suite and its JSON report.

pub mod error;
pub mod homology;
pub mod linalg;
pub mod lincomb;
mod par;
pub mod rational;
pub mod report;
pub mod series;
pub mod smodule;
pub mod symfunc;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use rational::Q;
