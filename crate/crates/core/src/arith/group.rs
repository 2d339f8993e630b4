use std::fmt;
use serde::{Deserialize, Serialize};
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::Zero;

use super::point::UhsPoint;
use super::quad::{QuadInt, QuadRat};
use super::ring::RingDescriptor;
use crate::error::{Error, Result};

/// A matrix (a b; c d) of determinant one over O₋ₘ.
///
/// With `projective` set the element stands for its class in PSL₂ and is
/// stored with the sign that makes the first nonzero entry positive, so
/// equality and hashing are structural.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: QuadInt,
    pub b: QuadInt,
    pub c: QuadInt,
    pub d: QuadInt,
    projective: bool,
}

impl PartialEq for GroupElement {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.c == o.c && self.d == o.d
    }
}
impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
        self.d.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GroupElement {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (&self.a, &self.b, &self.c, &self.d).cmp(&(&o.a, &o.b, &o.c, &o.d))
    }
}

impl GroupElement {
    /// Projective element; panics unless ad − bc = 1.
    pub fn new(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Self {
        Self::with_model(a, b, c, d, true)
    }

    pub fn linear(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Self {
        Self::with_model(a, b, c, d, false)
    }

    fn with_model(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt, projective: bool) -> Self {
        let g = GroupElement { a, b, c, d, projective };
        assert!(g.det().is_one(), "determinant of {g} is not one");
        g.normalised()
    }

    fn normalised(self) -> Self {
        if !self.projective {
            return self;
        }
        let lead = [&self.a, &self.b, &self.c, &self.d].into_iter().find(|x| !x.is_zero()).cloned();
        match lead {
            Some(x) if !x.is_positive_normalised() => GroupElement {
                a: -&self.a,
                b: -&self.b,
                c: -&self.c,
                d: -&self.d,
                projective: true,
            },
            _ => self,
        }
    }

    pub fn identity(ring: RingDescriptor) -> Self {
        Self::new(QuadInt::one(ring), QuadInt::zero(ring), QuadInt::zero(ring), QuadInt::one(ring))
    }

    /// z ↦ z + k.
    pub fn translation(k: QuadInt) -> Self {
        let r = k.ring();
        Self::new(QuadInt::one(r), k, QuadInt::zero(r), QuadInt::one(r))
    }

    /// (u 0; 0 u⁻¹) for a unit u, acting as z ↦ u²z.
    pub fn unit_rotation(u: &QuadInt) -> Self {
        let r = u.ring();
        // u⁻¹ = ū for units
        Self::new(u.clone(), QuadInt::zero(r), QuadInt::zero(r), u.conj())
    }

    /// S = (0 −1; 1 0).
    pub fn inversion(ring: RingDescriptor) -> Self {
        Self::new(QuadInt::zero(ring), -&QuadInt::one(ring), QuadInt::one(ring), QuadInt::zero(ring))
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn ring(&self) -> RingDescriptor {
        self.a.ring()
    }

    pub fn det(&self) -> QuadInt {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> QuadInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && (self.a.is_one() || (self.projective && (-&self.a).is_one()))
    }

    pub fn to_projective(&self) -> Self {
        GroupElement { projective: true, ..self.clone() }.normalised()
    }

    pub fn to_linear(&self) -> Self {
        GroupElement { projective: false, ..self.clone() }
    }

    pub fn negated(&self) -> Self {
        GroupElement { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d, projective: self.projective }.normalised()
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
            projective: self.projective && o.projective,
        }
        .normalised()
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone(), projective: self.projective }
            .normalised()
    }

    pub fn conjugate_by(&self, g: &GroupElement) -> GroupElement {
        g.inverse().mul(self).mul(g)
    }

    /// Order of the element in its model; `None` if it exceeds `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut x = self.clone();
        for k in 1..=cap {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }

    /// |cz + d|² + |c|²t², the denominator of the Poincaré extension.
    pub fn distortion(&self, p: &UhsPoint) -> BigRational {
        let cz_d = &(&QuadRat::from_int(self.c.clone()) * &p.z) + &QuadRat::from_int(self.d.clone());
        cz_d.norm() + BigRational::from_integer(self.c.norm()) * &p.t_sq
    }

    /// Exact image of a point under the Poincaré extension of z ↦ (az+b)/(cz+d).
    pub fn act(&self, p: &UhsPoint) -> Result<UhsPoint> {
        let dist = self.distortion(p);
        if dist.is_zero() {
            return Err(Error::IdealPoint);
        }
        let a = QuadRat::from_int(self.a.clone());
        let b = QuadRat::from_int(self.b.clone());
        let c = QuadRat::from_int(self.c.clone());
        let d = QuadRat::from_int(self.d.clone());
        let az_b = &(&a * &p.z) + &b;
        let cz_d = &(&c * &p.z) + &d;
        let tsq = QuadRat::from_rational(&p.t_sq, self.ring());
        let num = &(&az_b * &cz_d.conj()) + &(&(&a * &c.conj()) * &tsq);
        let z = num.scale_rat(&dist.recip());
        let t_sq = &p.t_sq / (&dist * &dist);
        Ok(UhsPoint::new(z, t_sq))
    }

    /// Floating-point shadow of `act`, used as a consistency check.
    pub fn act_f64(&self, p: [f64; 3]) -> [f64; 3] {
        let (ar, ai) = self.a.to_f64();
        let (br, bi) = self.b.to_f64();
        let (cr, ci) = self.c.to_f64();
        let (dr, di) = self.d.to_f64();
        let (x, y, t) = (p[0], p[1], p[2]);
        let mul = |(p, q): (f64, f64), (r, s): (f64, f64)| (p * r - q * s, p * s + q * r);
        let add = |(p, q): (f64, f64), (r, s): (f64, f64)| (p + r, q + s);
        let azb = add(mul((ar, ai), (x, y)), (br, bi));
        let czd = add(mul((cr, ci), (x, y)), (dr, di));
        let dist = czd.0 * czd.0 + czd.1 * czd.1 + (cr * cr + ci * ci) * t * t;
        let num = add(mul(azb, (czd.0, -czd.1)), mul(mul((ar, ai), (cr, -ci)), (t * t, 0.0)));
        [num.0 / dist, num.1 / dist, t / dist]
    }

    /// Image of a boundary point of ℂ ∪ {∞}; `None` stands for ∞.
    pub fn act_boundary(&self, z: Option<&QuadRat>) -> Option<QuadRat> {
        let a = QuadRat::from_int(self.a.clone());
        let b = QuadRat::from_int(self.b.clone());
        let c = QuadRat::from_int(self.c.clone());
        let d = QuadRat::from_int(self.d.clone());
        match z {
            None => {
                if c.is_zero() {
                    None
                } else {
                    Some(a.div(&c))
                }
            }
            Some(z) => {
                let den = &(&c * z) + &d;
                if den.is_zero() {
                    None
                } else {
                    Some((&(&a * z) + &b).div(&den))
                }
            }
        }
    }
}

#[cfg(test)]
fn point_f64_close(p: [f64; 3], q: [f64; 3], tol: f64) -> bool {
    p.iter().zip(q.iter()).all(|(a, b)| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())))
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ring(m: u64) -> RingDescriptor {
        RingDescriptor::new(m).unwrap()
    }

    fn q(a: i64, b: i64, r: RingDescriptor) -> QuadInt {
        QuadInt::new(a, b, r)
    }

    fn pt(a: i64, b: i64, den: i64, tn: i64, td: i64, r: RingDescriptor) -> UhsPoint {
        UhsPoint::new(QuadRat::new(q(a, b, r), BigInt::from(den)), BigRational::new(tn.into(), td.into()))
    }

    #[test]
    fn identity_and_translation() {
        let r = ring(19);
        let p = pt(1, 2, 3, 5, 7, r);
        assert_eq!(GroupElement::identity(r).act(&p).unwrap(), p);
        let t = GroupElement::translation(QuadInt::one(r));
        let img = t.act(&p).unwrap();
        assert_eq!(img.z, &p.z + &QuadRat::from_int(QuadInt::one(r)));
        assert_eq!(img.t_sq, p.t_sq);
    }

    #[test]
    fn inversion_on_vertical_axis() {
        // S(0, t²) = (0, 1/t²)
        let r = ring(2);
        let p = pt(0, 0, 1, 4, 9, r);
        let img = GroupElement::inversion(r).act(&p).unwrap();
        assert!(img.z.is_zero());
        assert_eq!(img.t_sq, BigRational::new(9.into(), 4.into()));
    }

    #[test]
    fn cusp_to_infinity_is_rejected() {
        let r = ring(1);
        let p = pt(0, 0, 1, 0, 1, r);
        assert_eq!(GroupElement::inversion(r).act(&p), Err(Error::IdealPoint));
    }

    #[test]
    fn projective_sign_normalisation() {
        let r = ring(1);
        let s = GroupElement::inversion(r);
        assert_eq!(s.negated(), s);
        assert!(s.mul(&s).is_identity());
        assert_eq!(s.order(12), Some(2));
        assert_eq!(s.to_linear().order(12), Some(4));
    }

    fn arb_element(r: RingDescriptor) -> impl Strategy<Value = GroupElement> {
        // words in translations, the inversion and unit rotations
        prop::collection::vec((0usize..3, -3i64..4, -2i64..3), 1..6).prop_map(move |word| {
            let mut g = GroupElement::identity(r);
            for (kind, x, y) in word {
                let h = match kind {
                    0 => GroupElement::translation(q(x, y, r)),
                    1 => GroupElement::inversion(r),
                    _ => GroupElement::translation(q(y, x, r)).mul(&GroupElement::inversion(r)),
                };
                g = g.mul(&h);
            }
            g
        })
    }

    fn arb_point(r: RingDescriptor) -> impl Strategy<Value = UhsPoint> {
        (-20i64..20, -20i64..20, 1i64..7, 1i64..30, 1i64..30)
            .prop_map(move |(a, b, d, tn, td)| pt(a, b, d, tn, td, r))
    }

    fn arb_triple() -> impl Strategy<Value = (GroupElement, GroupElement, UhsPoint)> {
        prop::sample::select(vec![1u64, 2, 3, 7, 19, 43])
            .prop_flat_map(|m| {
                let r = ring(m);
                (arb_element(r), arb_element(r), arb_point(r))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn action_is_a_homomorphism((g, h, p) in arb_triple()) {
            let lhs = g.mul(&h).act(&p).unwrap();
            let rhs = g.act(&h.act(&p).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(g.negated().act(&p).unwrap(), g.act(&p).unwrap());
            prop_assert!(lhs.t_sq > BigRational::zero());
            let shadow = g.mul(&h).act_f64(p.to_f64());
            prop_assert!(point_f64_close(shadow, lhs.to_f64(), 1e-9));
        }
    }
}
