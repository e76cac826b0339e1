//! Partition regularity of linear systems over rings and modules.
//!
//! The crate decides whether `A x = 0` (or `A x = b`) has a monochromatic
//! solution for every finite colouring, produces checkable witnesses and
//! refutations, and searches for explicit monochromatic solutions.

pub mod algebra;
pub mod arith;
pub mod colouring;
pub mod error;
pub mod nonhom;
pub mod regularity;
pub mod search;

pub use error::{Error, Result};
