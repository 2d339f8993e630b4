//! Exact planar geometry in ω-coordinates: a point z = α + βω is the pair (α, β).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{QuadInt, QuadRat, RingDescriptor};

pub type Pt = (BigRational, BigRational);

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The norm form |α + βω|² = α² + tαβ + nβ² and its polarisation.
#[derive(Clone, Debug)]
pub struct Plane {
    pub ring: RingDescriptor,
    t: BigRational,
    n: BigRational,
}

impl Plane {
    pub fn new(ring: RingDescriptor) -> Self {
        Plane { ring, t: rat(ring.omega_trace()), n: rat(ring.omega_norm()) }
    }

    pub fn q(&self, p: &Pt) -> BigRational {
        &p.0 * &p.0 + &self.t * &p.0 * &p.1 + &self.n * &p.1 * &p.1
    }

    /// Symmetric bilinear form with bil(p, p) = q(p).
    pub fn bil(&self, p: &Pt, r: &Pt) -> BigRational {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        &p.0 * &r.0 + &self.t * half * (&p.0 * &r.1 + &r.0 * &p.1) + &self.n * &p.1 * &r.1
    }

    /// Real part of α + βω.
    pub fn re(&self, p: &Pt) -> BigRational {
        &p.0 + &self.t * &p.1 / rat(2)
    }

    /// Translation (kα, kβ) ∈ ℤ² taking p into the fundamental rectangle
    /// 0 ≤ β < 1, −1/2 ≤ Re < 1/2 when subtracted.
    pub fn reduce_offset(&self, p: &Pt) -> (BigInt, BigInt) {
        let kb = p.1.floor().to_integer();
        let beta = &p.1 - BigRational::from_integer(kb.clone());
        let re = &p.0 + &self.t * &beta / rat(2);
        let ka = (re + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        (ka, kb)
    }

    pub fn in_rectangle(&self, p: &Pt) -> bool {
        let (a, b) = self.reduce_offset(p);
        a.is_zero() && b.is_zero()
    }

    pub fn to_quad(&self, p: &Pt) -> QuadRat {
        QuadRat::from_coords(&p.0, &p.1, self.ring)
    }

    pub fn from_quad(z: &QuadRat) -> Pt {
        z.coords()
    }

    pub fn offset_element(&self, k: &(BigInt, BigInt)) -> QuadInt {
        QuadInt::new(k.0.clone(), k.1.clone(), self.ring)
    }

    pub fn to_f64(&self, p: &Pt) -> (f64, f64) {
        self.to_quad(p).to_f64()
    }
}

pub fn sub(p: &Pt, r: &Pt) -> Pt {
    (&p.0 - &r.0, &p.1 - &r.1)
}

pub fn add(p: &Pt, r: &Pt) -> Pt {
    (&p.0 + &r.0, &p.1 + &r.1)
}

pub fn shift(p: &Pt, k: &(BigInt, BigInt)) -> Pt {
    (&p.0 + BigRational::from_integer(k.0.clone()), &p.1 + BigRational::from_integer(k.1.clone()))
}

pub fn unshift(p: &Pt, k: &(BigInt, BigInt)) -> Pt {
    (&p.0 - BigRational::from_integer(k.0.clone()), &p.1 - BigRational::from_integer(k.1.clone()))
}

pub fn lerp(p: &Pt, r: &Pt, s: &BigRational) -> Pt {
    (&p.0 + s * (&r.0 - &p.0), &p.1 + s * (&r.1 - &p.1))
}

/// Twice the signed area of a polygon in ω-coordinates (a positive
/// multiple of the Euclidean area, since the basis (1, ω) is positively oriented).
pub fn twice_area(poly: &[Pt]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..poly.len() {
        let p = &poly[i];
        let r = &poly[(i + 1) % poly.len()];
        s += &p.0 * &r.1 - &r.0 * &p.1;
    }
    s
}

/// Cross product of (b − a) and (c − a).
pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> BigRational {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

/// Whether p lies strictly between a and b on the segment [a, b].
pub fn strictly_inside_segment(p: &Pt, a: &Pt, b: &Pt) -> bool {
    if !orient(a, b, p).is_zero() || p == a || p == b {
        return false;
    }
    let d = sub(b, a);
    let s = if !d.0.is_zero() { (&p.0 - &a.0) / &d.0 } else { (&p.1 - &a.1) / &d.1 };
    s.is_positive() && s < BigRational::one()
}

pub fn floor_sqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn lcm_den(p: &Pt) -> BigInt {
    p.0.denom().lcm(p.1.denom())
}
