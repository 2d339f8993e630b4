//! ℓ-torsion subgraphs of the orbit complex, their reduction and
//! homeomorphism type, and the per-vertex checks on edge counts and rotation
//! axes.

pub mod axes;
pub mod graph;
pub mod rigidity;

pub use axes::{verify_axes_theorem, Axis, AxesReport};
pub use graph::{classify_type, extract, reduce, HomeoType, TorsionEdge, TorsionGraph, TorsionVertex};
pub use rigidity::{expected_count, verify_rigidity_counts, RigidityReport, RigidityRow};
