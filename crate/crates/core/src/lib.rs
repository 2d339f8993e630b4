//! Exact computations for the Bianchi groups PSL₂(O₋ₘ).

pub mod arith;
pub mod bredon;
pub mod complex;
pub mod error;
pub mod homology;
pub mod pipeline;
pub mod polyhedron;
pub mod reference;
pub mod torsion;

pub use error::{Error, Result};
