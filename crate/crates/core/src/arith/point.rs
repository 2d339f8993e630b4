use std::fmt;

use serde::{Deserialize, Serialize};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::quad::{rat_to_f64, QuadRat};
use super::ring::RingDescriptor;

/// A point (z, t) of the closed upper half-space, stored with t² so that all
/// coordinates stay rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UhsPoint {
    pub z: QuadRat,
    pub t_sq: BigRational,
}

impl UhsPoint {
    pub fn new(z: QuadRat, t_sq: BigRational) -> Self {
        assert!(!t_sq.is_negative(), "negative height");
        UhsPoint { z, t_sq }
    }

    pub fn from_coords(alpha: BigRational, beta: BigRational, t_sq: BigRational, ring: RingDescriptor) -> Self {
        Self::new(QuadRat::from_coords(&alpha, &beta, ring), t_sq)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.z.ring()
    }

    pub fn is_ideal(&self) -> bool {
        self.t_sq.is_zero()
    }

    /// Euclidean coordinates (x, y, t) as floats.
    pub fn to_f64(&self) -> [f64; 3] {
        let (x, y) = self.z.to_f64();
        [x, y, rat_to_f64(&self.t_sq).sqrt()]
    }
}

impl fmt::Display for UhsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, t²={})", self.z, self.t_sq)
    }
}
