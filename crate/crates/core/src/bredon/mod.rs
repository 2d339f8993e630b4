//! Bredon homology of the orbit complex with coefficients in complex
//! representation rings, and the equivariant K-homology it determines.

pub mod characters;
pub mod complex;

pub use characters::{induction_matrix, representation_ring, CharacterTable, Eisenstein};
pub use complex::{bredon_homology, build_bredon_complex, k_homology_assembly, BredonComplex, KHomologyResult};
