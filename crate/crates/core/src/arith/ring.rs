use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which generator of the ring of integers is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// ω = √−m, for m ≡ 1, 2 mod 4.
    SqrtMinusM,
    /// ω = (1 + √−m)/2, for m ≡ 3 mod 4.
    HalfIntegral,
}

/// The ring of integers O₋ₘ of ℚ(√−m), described by its generator ω.
///
/// ω satisfies ω² = tω − n with trace `t` and norm `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDescriptor {
    m: u64,
    kind: OmegaKind,
}

pub fn is_square_free(m: u64) -> bool {
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl RingDescriptor {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositive);
        }
        if !is_square_free(m) {
            return Err(Error::NotSquareFree(m));
        }
        let kind = if m % 4 == 3 { OmegaKind::HalfIntegral } else { OmegaKind::SqrtMinusM };
        Ok(RingDescriptor { m, kind })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn discriminant(&self) -> i64 {
        match self.kind {
            OmegaKind::SqrtMinusM => -4 * self.m as i64,
            OmegaKind::HalfIntegral => -(self.m as i64),
        }
    }

    /// ω + ω̄.
    pub fn omega_trace(&self) -> i64 {
        match self.kind {
            OmegaKind::SqrtMinusM => 0,
            OmegaKind::HalfIntegral => 1,
        }
    }

    /// ω · ω̄.
    pub fn omega_norm(&self) -> i64 {
        match self.kind {
            OmegaKind::SqrtMinusM => self.m as i64,
            OmegaKind::HalfIntegral => (self.m as i64 + 1) / 4,
        }
    }

    /// Imaginary part of ω as a float (only used for shadows and exports).
    pub fn omega_imag_f64(&self) -> f64 {
        match self.kind {
            OmegaKind::SqrtMinusM => (self.m as f64).sqrt(),
            OmegaKind::HalfIntegral => (self.m as f64).sqrt() / 2.0,
        }
    }

    pub fn omega_real_f64(&self) -> f64 {
        self.omega_trace() as f64 / 2.0
    }

    /// Number of units of O₋ₘ.
    pub fn unit_count(&self) -> usize {
        match self.m {
            1 => 4,
            3 => 6,
            _ => 2,
        }
    }
}

/// Convenience wrapper mirroring the operation name used by the CLI.
pub fn make_ring(m: u64) -> Result<RingDescriptor> {
    RingDescriptor::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_eisenstein() {
        let r1 = make_ring(1).unwrap();
        assert_eq!(r1.kind(), OmegaKind::SqrtMinusM);
        assert_eq!(r1.discriminant(), -4);
        let r3 = make_ring(3).unwrap();
        assert_eq!(r3.kind(), OmegaKind::HalfIntegral);
        assert_eq!(r3.discriminant(), -3);
        assert_eq!(r3.omega_norm(), 1);
    }

    #[test]
    fn rejects_non_square_free() {
        assert_eq!(make_ring(12), Err(Error::NotSquareFree(12)));
        assert_eq!(make_ring(0), Err(Error::NonPositive));
        assert!(make_ring(163).is_ok());
    }
}
