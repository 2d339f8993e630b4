//! The Bianchi fundamental polyhedron: hemispheres, floor and cusps.

pub mod hemisphere;
pub mod plane;

pub use hemisphere::{enumerate_hemispheres, Hemisphere};
pub mod floor;

pub use floor::{floor_decomposition, Floor, FloorFace};
pub mod fundamental;

pub use fundamental::{class_number, cusp_set, face_pairings, FundamentalPolyhedron};
