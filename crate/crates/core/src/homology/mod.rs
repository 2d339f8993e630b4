pub mod abelian;
pub mod fp;
pub mod matrix;
pub mod poincare;

pub use abelian::{chain_homology, AbelianGroup};
pub use matrix::IntMatrix;
pub mod group;
pub mod resolution;
pub mod equivariant;
