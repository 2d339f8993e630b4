use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::plane::{rat, sub, Plane, Pt};
use crate::arith::{unit_group, GroupElement, QuadInt, QuadRat, RingDescriptor, UhsPoint};
use crate::homology::matrix::{solve, IntMatrix};

/// The hemisphere |λz − μ|² + N(λ)t² = 1 over the disc of centre μ/λ and
/// radius² 1/N(λ), for a unimodular pair (μ, λ).
#[derive(Clone, Debug)]
pub struct Hemisphere {
    pub lambda: QuadInt,
    pub mu: QuadInt,
    pub center: QuadRat,
    pub radius_sq: BigRational,
}

impl PartialEq for Hemisphere {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}
impl Eq for Hemisphere {}

impl Hemisphere {
    pub fn new(mu: QuadInt, lambda: QuadInt) -> Self {
        assert!(!lambda.is_zero());
        let center = QuadRat::from_int(mu.clone()).div(&QuadRat::from_int(lambda.clone()));
        let radius_sq = BigRational::new(BigInt::one(), lambda.norm());
        Hemisphere { lambda, mu, center, radius_sq }
    }

    /// Sort key: the centre coordinates, then the radius.
    pub fn key(&self) -> (Pt, BigRational) {
        (self.center.coords(), self.radius_sq.clone())
    }

    pub fn center_pt(&self) -> Pt {
        self.center.coords()
    }

    pub fn norm_lambda(&self) -> BigInt {
        self.lambda.norm()
    }

    /// |λz − μ|² + N(λ)t² − 1: zero on the hemisphere, negative strictly below.
    pub fn excess(&self, p: &UhsPoint) -> BigRational {
        let w = &(&QuadRat::from_int(self.lambda.clone()) * &p.z) - &QuadRat::from_int(self.mu.clone());
        w.norm() + BigRational::from_integer(self.lambda.norm()) * &p.t_sq - BigRational::one()
    }

    pub fn contains(&self, p: &UhsPoint) -> bool {
        self.excess(p).is_zero()
    }

    pub fn strictly_covers(&self, p: &UhsPoint) -> bool {
        self.excess(p).is_negative()
    }

    /// Height² of the hemisphere over z; negative outside its disc.
    pub fn height_sq(&self, plane: &Plane, z: &Pt) -> BigRational {
        &self.radius_sq - plane.q(&sub(z, &self.center_pt()))
    }

    /// The hemisphere moved by z ↦ z + k.
    pub fn translated(&self, k: &QuadInt) -> Hemisphere {
        Hemisphere::new(&self.mu + &(k * &self.lambda), self.lambda.clone())
    }

    /// An element (a b; λ −μ) of determinant one. It sends the centre to ∞
    /// and maps the hemisphere onto the hemisphere of centre a/λ.
    pub fn inversion_element(&self) -> GroupElement {
        let ring = self.lambda.ring();
        let om = QuadInt::omega(ring);
        let cols = [self.mu.clone(), &self.mu * &om, self.lambda.clone(), &self.lambda * &om];
        let a = IntMatrix::from_columns(2, &cols.iter().map(|x| vec![x.a.clone(), x.b.clone()]).collect::<Vec<_>>());
        let x = solve(&a, &[BigInt::from(-1), BigInt::zero()]).expect("pair is unimodular");
        let aa = QuadInt::new(x[0].clone(), x[1].clone(), ring);
        let bb = QuadInt::new(x[2].clone(), x[3].clone(), ring);
        GroupElement::new(aa, bb, self.lambda.clone(), -&self.mu)
    }
}

/// Index of the ℤ-lattice spanned by the given elements in O (0 if not of full rank).
pub fn lattice_index(gens: &[QuadInt]) -> BigInt {
    let mut g = BigInt::zero();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let m = &gens[i].a * &gens[j].b - &gens[i].b * &gens[j].a;
            g = g.gcd(&m);
        }
    }
    g
}

/// Whether μ and λ generate the unit ideal.
pub fn is_unimodular(mu: &QuadInt, lambda: &QuadInt) -> bool {
    let om = QuadInt::omega(mu.ring());
    lattice_index(&[mu.clone(), mu * &om, lambda.clone(), lambda * &om]).is_one()
}

/// Representatives of O/λO as a box {a + bω : 0 ≤ a < e, 0 ≤ b < g}.
pub fn residues(lambda: &QuadInt) -> Vec<QuadInt> {
    let ring = lambda.ring();
    let v2 = lambda * &QuadInt::omega(ring);
    let (a1, b1) = (&lambda.a, &lambda.b);
    let (a2, b2) = (&v2.a, &v2.b);
    let eg = a1.extended_gcd(a2);
    let e = eg.gcd.abs();
    let det = (a1 * b2 - a2 * b1).abs();
    let g = if e.is_zero() {
        // λO would lie in ℤω; impossible for λ ≠ 0
        unreachable!("degenerate lattice")
    } else {
        &det / &e
    };
    let mut out = Vec::new();
    let mut a = BigInt::zero();
    while a < e {
        let mut b = BigInt::zero();
        while b < g {
            out.push(QuadInt::new(a.clone(), b.clone(), ring));
            b += 1;
        }
        a += 1;
    }
    out
}

fn canonical_mod_units(x: &QuadInt, units: &[QuadInt]) -> QuadInt {
    units.iter().map(|u| u * x).min().unwrap()
}

/// All nonzero λ with N(λ) ≤ bound, one per class modulo units.
pub fn lambdas(ring: RingDescriptor, bound: &BigInt) -> Vec<QuadInt> {
    let units = unit_group(ring);
    let t = BigInt::from(ring.omega_trace());
    let n = BigInt::from(ring.omega_norm());
    // N(a + bω) ≥ (4n − t²)b²/4
    let disc = BigInt::from(4) * &n - &t * &t;
    let bmax: BigInt = (BigInt::from(4) * bound / &disc).sqrt() + 1;
    let amax: BigInt = bound.sqrt() + &bmax + 1;
    let mut out = Vec::new();
    let mut b = -bmax.clone();
    while b <= bmax {
        let mut a = -amax.clone();
        while a <= amax {
            let x = QuadInt::new(a.clone(), b.clone(), ring);
            let nx = x.norm();
            if !nx.is_zero() && &nx <= bound && canonical_mod_units(&x, &units) == x {
                out.push(x);
            }
            a += 1;
        }
        b += 1;
    }
    out.sort_by(|x, y| x.norm().cmp(&y.norm()).then(x.cmp(y)));
    out
}

/// Bounds of the window of centres, in β and in Re: the fundamental rectangle
/// widened by `margin` Euclidean units.
pub(crate) struct Window {
    pub beta_lo: BigRational,
    pub beta_hi: BigRational,
    pub re_lo: BigRational,
    pub re_hi: BigRational,
}

impl Window {
    pub fn new(ring: RingDescriptor, margin: i64) -> Self {
        // 1/Im ω ≤ c/⌊√m⌋ with c = 1, or c = 2 when ω is half-integral
        let c = if ring.omega_trace() == 0 { 1 } else { 2 };
        let s = BigInt::from(ring.m()).sqrt();
        let mb = BigRational::new(BigInt::from(c * margin), s);
        Window {
            beta_lo: -mb.clone(),
            beta_hi: rat(1) + mb,
            re_lo: BigRational::new(BigInt::from(-1), BigInt::from(2)) - rat(margin),
            re_hi: BigRational::new(BigInt::from(1), BigInt::from(2)) + rat(margin),
        }
    }

    pub fn contains(&self, plane: &Plane, p: &Pt) -> bool {
        let re = plane.re(p);
        p.1 >= self.beta_lo && p.1 <= self.beta_hi && re >= self.re_lo && re <= self.re_hi
    }
}

/// Hemispheres with N(λ) ≤ bound whose centres lie in the rectangle widened
/// by two units, deduplicated and sorted by (centre, radius).
pub fn enumerate_hemispheres(ring: RingDescriptor, norm_bound: u64) -> Vec<Hemisphere> {
    enumerate_in_window(ring, norm_bound, 2)
}

pub(crate) fn enumerate_in_window(ring: RingDescriptor, norm_bound: u64, margin: i64) -> Vec<Hemisphere> {
    let plane = Plane::new(ring);
    let win = Window::new(ring, margin);
    let mut found: BTreeMap<(Pt, BigRational), Hemisphere> = BTreeMap::new();
    for lambda in lambdas(ring, &BigInt::from(norm_bound)) {
        for mu in residues(&lambda) {
            if !is_unimodular(&mu, &lambda) {
                continue;
            }
            let h = Hemisphere::new(mu, lambda.clone());
            let c = h.center_pt();
            let k0 = plane.reduce_offset(&c);
            let base = h.translated(&(-plane.offset_element(&k0)));
            let bc = base.center_pt();
            // translates of the reduced centre falling inside the window
            let span_b = win.beta_hi.ceil().to_integer().to_string().parse::<i64>().unwrap() + 1;
            let span_a = margin + 2 + span_b;
            for kb in -span_b..=span_b {
                for ka in -span_a..=span_a {
                    let k = (BigInt::from(ka), BigInt::from(kb));
                    let p = super::plane::shift(&bc, &k);
                    if win.contains(&plane, &p) {
                        let ht = base.translated(&plane.offset_element(&k));
                        found.entry(ht.key()).or_insert(ht);
                    }
                }
            }
        }
    }
    found.into_values().collect()
}
