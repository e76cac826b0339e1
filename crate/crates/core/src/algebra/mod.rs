//! Exact rings, scalars, matrices and linear algebra.

mod annihilator;
pub(crate) mod chain;
pub(crate) mod echelon;
pub mod json;
mod linalg;
mod matrix;
pub(crate) mod poly;
mod ring;

pub use annihilator::annihilator_infinite;
pub use linalg::{fraction_field, fraction_field_embed, nullspace, rref, solve, span_contains, Subspace};
pub use matrix::Matrix;
pub use ring::{reduce_bigint, Multiplicity, RingDescriptor, Scalar};
