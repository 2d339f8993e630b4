//! The Γ-equivariant cell structure on the retract spanned by the floor.

pub mod cells;
pub mod finite;
pub mod orbit;
pub mod search;

pub use finite::{FiniteSubgroup, IsoType, LinearType};
pub use orbit::{Incidence, OrbitCell, OrbitComplex};
