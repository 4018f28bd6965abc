//! Cohen-Macaulay / Gorenstein analysis of Stanley-Reisner rings of finite
//! simplicial complexes over exact fields, by two independent routes that
//! are cross-validated: link-cohomology criteria and hsop/quotient-algebra
//! computation. Also computes higher derived limits over the face poset.

pub mod cli;
pub mod complex;
pub mod criteria;
pub mod face_ring;
pub mod homology;
pub mod limits;
pub mod linalg;
pub mod regularity;

pub use complex::{Face, SimplicialComplex};
pub use linalg::{ExactMatrix, FieldSpec, Scalar};
