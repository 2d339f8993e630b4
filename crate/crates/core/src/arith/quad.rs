use std::cmp::Ordering;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use super::ring::RingDescriptor;

/// An element a + bω of O₋ₘ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    ring: RingDescriptor,
}

impl PartialEq for QuadInt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}
impl Eq for QuadInt {}

impl std::hash::Hash for QuadInt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.a, &self.b).cmp(&(&other.a, &other.b))
    }
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, ring: RingDescriptor) -> Self {
        QuadInt { a: a.into(), b: b.into(), ring }
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        Self::new(0, 0, ring)
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::new(1, 0, ring)
    }

    pub fn omega(ring: RingDescriptor) -> Self {
        Self::new(0, 1, ring)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        let t = BigInt::from(self.ring.omega_trace());
        QuadInt { a: &self.a + &t * &self.b, b: -&self.b, ring: self.ring }
    }

    /// Field norm x·x̄ = a² + t·ab + n·b².
    pub fn norm(&self) -> BigInt {
        let t = BigInt::from(self.ring.omega_trace());
        let n = BigInt::from(self.ring.omega_norm());
        &self.a * &self.a + t * &self.a * &self.b + n * &self.b * &self.b
    }

    /// Trace x + x̄ = 2a + t·b.
    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.a + BigInt::from(self.ring.omega_trace()) * &self.b
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { a: &self.a * k, b: &self.b * k, ring: self.ring }
    }

    /// Sign used to pick a canonical element of {x, −x}: the first nonzero
    /// coordinate is positive.
    pub fn is_positive_normalised(&self) -> bool {
        if !self.a.is_zero() {
            self.a.is_positive()
        } else {
            self.b.is_positive()
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let a = bigint_to_f64(&self.a);
        let b = bigint_to_f64(&self.b);
        (a + b * self.ring.omega_real_f64(), b * self.ring.omega_imag_f64())
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}w", self.b),
            _ => {
                if self.b.is_negative() {
                    write!(f, "{}-{}w", self.a, -&self.b)
                } else {
                    write!(f, "{}+{}w", self.a, self.b)
                }
            }
        }
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        QuadInt { a: &self.a + &o.a, b: &self.b + &o.b, ring: self.ring }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        QuadInt { a: &self.a - &o.a, b: &self.b - &o.b, ring: self.ring }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -&self.a, b: -&self.b, ring: self.ring }
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        // ω² = tω − n
        let t = BigInt::from(self.ring.omega_trace());
        let n = BigInt::from(self.ring.omega_norm());
        let bd = &self.b * &o.b;
        QuadInt {
            a: &self.a * &o.a - &n * &bd,
            b: &self.a * &o.b + &self.b * &o.a + &t * &bd,
            ring: self.ring,
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        &self + &o
    }
}
impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        &self - &o
    }
}
impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        &self * &o
    }
}
impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// All units of the ring, found by brute force over small coordinates.
pub fn unit_group(ring: RingDescriptor) -> Vec<QuadInt> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            let x = QuadInt::new(a, b, ring);
            if x.norm().is_one() {
                out.push(x);
            }
        }
    }
    out
}

/// An element num/den of the field ℚ(√−m), kept in lowest terms with den > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadRat {
    num: QuadInt,
    den: BigInt,
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a1, b1) = self.coords();
        let (a2, b2) = other.coords();
        (a1, b1).cmp(&(a2, b2))
    }
}

impl QuadRat {
    pub fn new(num: QuadInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.a.gcd(&num.b).gcd(&den);
        let mut num = QuadInt { a: &num.a / &g, b: &num.b / &g, ring: num.ring };
        let mut den = den / g;
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        QuadRat { num, den }
    }

    pub fn from_int(x: QuadInt) -> Self {
        QuadRat { num: x, den: BigInt::one() }
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        Self::from_int(QuadInt::zero(ring))
    }

    pub fn from_rational(r: &BigRational, ring: RingDescriptor) -> Self {
        Self::new(QuadInt::new(r.numer().clone(), BigInt::zero(), ring), r.denom().clone())
    }

    /// Build α + βω from rational coordinates.
    pub fn from_coords(alpha: &BigRational, beta: &BigRational, ring: RingDescriptor) -> Self {
        let den = alpha.denom().lcm(beta.denom());
        let a = alpha.numer() * (&den / alpha.denom());
        let b = beta.numer() * (&den / beta.denom());
        Self::new(QuadInt::new(a, b, ring), den)
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn ring(&self) -> RingDescriptor {
        self.num.ring
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Coordinates (α, β) with self = α + βω.
    pub fn coords(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.num.a.clone(), self.den.clone()),
            BigRational::new(self.num.b.clone(), self.den.clone()),
        )
    }

    /// Some integral element if this value lies in O₋ₘ.
    pub fn to_integer(&self) -> Option<QuadInt> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        QuadRat { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn norm(&self) -> BigRational {
        BigRational::new(self.num.norm(), &self.den * &self.den)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        // (x/d)^{-1} = d·x̄ / N(x)
        Self::new(self.num.conj().scale(&self.den), self.num.norm())
    }

    pub fn div(&self, o: &QuadRat) -> Self {
        self * &o.inv()
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        Self::new(self.num.scale(r.numer()), &self.den * r.denom())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let (x, y) = self.num.to_f64();
        let d = bigint_to_f64(&self.den);
        (x / d, y / d)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, o: &QuadRat) -> QuadRat {
        QuadRat::new(&self.num.scale(&o.den) + &o.num.scale(&self.den), &self.den * &o.den)
    }
}
impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, o: &QuadRat) -> QuadRat {
        QuadRat::new(&self.num.scale(&o.den) - &o.num.scale(&self.den), &self.den * &o.den)
    }
}
impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, o: &QuadRat) -> QuadRat {
        QuadRat::new(&self.num * &o.num, &self.den * &o.den)
    }
}
impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(m: u64) -> RingDescriptor {
        RingDescriptor::new(m).unwrap()
    }

    #[test]
    fn norms_of_small_elements() {
        assert_eq!(QuadInt::omega(ring(1)).norm(), BigInt::from(1));
        assert_eq!(QuadInt::new(1, 1, ring(2)).norm(), BigInt::from(3));
        assert_eq!(QuadInt::omega(ring(3)).norm(), BigInt::from(1));
    }

    #[test]
    fn omega_squared_relation() {
        // ω² − tω + n = 0
        for m in [1u64, 2, 3, 7, 19, 163] {
            let r = ring(m);
            let w = QuadInt::omega(r);
            let lhs = &(&w * &w) - &w.scale(&BigInt::from(r.omega_trace()));
            assert_eq!(lhs, QuadInt::new(-r.omega_norm(), 0, r));
        }
    }

    #[test]
    fn unit_counts() {
        // oracle: brute force over a wider box than the implementation
        for m in [1u64, 2, 3, 5, 7, 19, 43] {
            let r = ring(m);
            let mut count = 0;
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    if QuadInt::new(a, b, r).norm() == BigInt::from(1) {
                        count += 1;
                    }
                }
            }
            assert_eq!(unit_group(r).len(), count);
            assert_eq!(count, r.unit_count());
        }
        let u1 = unit_group(ring(1));
        assert!(u1.contains(&QuadInt::omega(ring(1))));
        assert!(u1.contains(&QuadInt::new(-1, 0, ring(1))));
        let u19 = unit_group(ring(19));
        assert_eq!(u19, vec![QuadInt::new(-1, 0, ring(19)), QuadInt::new(1, 0, ring(19))]);
    }

    #[test]
    fn rational_normal_form() {
        let r = ring(7);
        let x = QuadRat::new(QuadInt::new(4, -6, r), BigInt::from(-8));
        assert_eq!(x.den(), &BigInt::from(4));
        assert_eq!(x.num(), &QuadInt::new(-2, 3, r));
        let y = x.inv();
        let one = &x * &y;
        assert_eq!(one, QuadRat::from_int(QuadInt::one(r)));
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(m in prop::sample::select(vec![1u64, 2, 3, 5, 7, 11, 15, 19, 43, 163]),
                                  a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let r = ring(m);
            let x = QuadInt::new(a, b, r);
            let y = QuadInt::new(c, d, r);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert!(x.norm() >= BigInt::zero());
            prop_assert_eq!(x.norm().is_zero(), x.is_zero());
        }

        #[test]
        fn field_division_round_trips(m in prop::sample::select(vec![1u64, 2, 3, 7, 19]),
                                      a in -20i64..20, b in -20i64..20, c in 1i64..20, d in -20i64..20, e in 1i64..9) {
            let r = ring(m);
            let x = QuadRat::new(QuadInt::new(a, b, r), BigInt::from(e));
            let y = QuadRat::new(QuadInt::new(c, d, r), BigInt::from(3));
            prop_assert_eq!(&x.div(&y) * &y, x);
        }
    }
}
