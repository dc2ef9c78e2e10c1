//! Exact line-bundle cohomology and exceptional sequences of line bundles on
//! Picard-rank-2 projective bundles over projective space.
//!
//! Everything works in nef coordinates `(i, j) = i·h + j·H` of `Pic ≅ Z²`.
//! Vanishing data comes from closed-form region tables that are cross-checked
//! against independent oracles in [`cohomology::oracle`].

pub mod chow;
pub mod cohomology;
pub mod error;
pub mod exec;
pub mod mutation;
pub mod poset;
pub mod rouquier;
pub mod toric;
pub mod variety;
pub mod verify;
pub mod x2;

pub use cohomology::CohomologyVector;
pub use error::{Error, Result};
pub use exec::Exec;
pub use poset::{ExceptionalSequence, ExceptionalSet, Relation};
pub use variety::{LineBundle, VarietySpec};
