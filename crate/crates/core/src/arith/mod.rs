//! Exact arithmetic in O₋ₘ and ℚ(√−m), and the action of SL₂(O₋ₘ) on
//! upper half-space.

pub mod group;
pub mod point;
pub mod quad;
pub mod ring;

pub use group::GroupElement;
pub use point::UhsPoint;
pub use quad::{unit_group, QuadInt, QuadRat};
pub use ring::{make_ring, OmegaKind, RingDescriptor};
