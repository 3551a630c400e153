//! Exact sparse linear algebra over Z, Q and F_p.

mod homology;
mod matrix;
mod ring;
mod snf;

pub(crate) use homology::map_invariants;
pub use homology::{homology_at, DegreeKey, HomologyGroup, HomologySummary};
pub use matrix::SparseIntMatrix;
pub use ring::Ring;
pub use snf::{rank, smith_normal_form, smith_normal_form_with_transforms, SmithDecomposition};
