//! The floor of the polyhedron: the part of the boundary of the region above
//! all hemispheres, decomposed into one convex polygon per hemisphere.
//!
//! Over z the floor has height² max_S (r_S² − |z − c_S|²), so its projection is
//! the power diagram of the discs, computed cell by cell by half-plane clipping.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hemisphere::{enumerate_in_window, lattice_index, Hemisphere};
use super::plane::{self, rat, shift, strictly_inside_segment, sub, twice_area, Plane, Pt};
use crate::arith::{QuadInt, RingDescriptor, UhsPoint};
use crate::error::{Error, Result};

/// One 2-cell of the floor: the part of a hemisphere lying on the floor.
#[derive(Clone, Debug)]
pub struct FloorFace {
    pub hemisphere: Hemisphere,
    /// Projection vertices counterclockwise, with points of neighbouring
    /// cells lying on an edge inserted as extra vertices.
    pub polygon: Vec<Pt>,
}

impl FloorFace {
    pub fn vertices(&self, plane: &Plane) -> Vec<UhsPoint> {
        self.polygon.iter().map(|p| lift(plane, &self.hemisphere, p)).collect()
    }
}

pub fn lift(plane: &Plane, h: &Hemisphere, p: &Pt) -> UhsPoint {
    UhsPoint::new(plane.to_quad(p), h.height_sq(plane, p))
}

#[derive(Clone, Debug)]
pub struct Floor {
    pub ring: RingDescriptor,
    pub norm_bound: u64,
    /// Faces whose hemisphere centre lies in the fundamental rectangle.
    pub faces: Vec<FloorFace>,
    /// Hemispheres with centres around the rectangle, used for incidence queries.
    pub hemispheres: Vec<Hemisphere>,
    /// Minimal height² over vertices that are not singular.
    pub min_height_sq: BigRational,
    /// Vertices at height zero, reduced into the rectangle.
    pub singular: Vec<Pt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attempt {
    /// A vertex is strictly below the floor of some unused hemisphere, or
    /// the floor reaches height zero at a point that is covered.
    Uncovered,
    /// All vertices are covered, but hemispheres of norm up to the given
    /// value may still cut the floor.
    NeedBound(u64),
}

struct Disc {
    c: (f64, f64),
    r: f64,
}

fn disc_f64(plane: &Plane, h: &Hemisphere) -> Disc {
    let c = plane.to_f64(&h.center_pt());
    let r = (1.0 / h.norm_lambda().to_f64().unwrap()).sqrt();
    Disc { c, r }
}

/// Power-diagram cell of `s` among `others` (assumed to include every
/// hemisphere whose disc meets the disc of `s`).
///
/// A floating-point pass finds the half-planes that come close to the cell;
/// only those are applied exactly.
fn power_cell(plane: &Plane, s: &Hemisphere, others: &[&Hemisphere]) -> Vec<Pt> {
    let n = s.norm_lambda();
    let r_up = BigRational::new(BigInt::one(), n.sqrt());
    let c = s.center_pt();
    let t = rat(plane.ring.omega_trace());
    let db = &r_up * rat(2);
    // parallelogram |Δβ| ≤ 2r, |Δα + tΔβ/2| ≤ r containing the disc
    let mut poly: Vec<Pt> = Vec::new();
    for (sb, sa) in [(-1, -1), (-1, 1), (1, 1), (1, -1)] {
        let dbeta = &db * rat(sb);
        let dalpha = &r_up * rat(sa) - &t * &dbeta / rat(2);
        poly.push((&c.0 + dalpha, &c.1 + dbeta));
    }
    if twice_area(&poly).is_negative() {
        poly.reverse();
    }
    let qs = plane.q(&c);
    let constraints: Vec<(Pt, BigRational)> = others
        .iter()
        .filter(|o| o.center_pt() != c)
        .map(|o| {
            let ct = o.center_pt();
            let k = &s.radius_sq - &o.radius_sq - &qs + plane.q(&ct);
            (sub(&c, &ct), k)
        })
        .collect();
    let tf = plane.ring.omega_trace() as f64;
    let nf = plane.ring.omega_norm() as f64;
    let bil_f = |z: (f64, f64), d: (f64, f64)| z.0 * d.0 + tf * 0.5 * (z.0 * d.1 + d.0 * z.1) + nf * z.1 * d.1;
    let cons_f: Vec<((f64, f64), f64)> =
        constraints.iter().map(|(d, k)| ((d.0.to_f64().unwrap(), d.1.to_f64().unwrap()), k.to_f64().unwrap())).collect();
    let eps = 1e-7;
    let mut fpoly: Vec<(f64, f64)> = poly.iter().map(|p| (p.0.to_f64().unwrap(), p.1.to_f64().unwrap())).collect();
    for (d, k) in &cons_f {
        let f = |z: (f64, f64)| 2.0 * bil_f(z, *d) + k + eps;
        fpoly = clip_f64(&fpoly, f);
        if fpoly.len() < 3 {
            return Vec::new();
        }
    }
    for (i, (d, k)) in constraints.iter().enumerate() {
        let (df, kf) = cons_f[i];
        let near = fpoly.iter().any(|&z| 2.0 * bil_f(z, df) + kf <= 10.0 * eps);
        if !near {
            continue;
        }
        let f = |z: &Pt| plane.bil(z, d) * rat(2) + k;
        poly = clip(poly, f);
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    if twice_area(&poly).is_zero() {
        return Vec::new();
    }
    poly
}

fn clip_f64(poly: &[(f64, f64)], f: impl Fn((f64, f64)) -> f64) -> Vec<(f64, f64)> {
    let vals: Vec<f64> = poly.iter().map(|&p| f(p)).collect();
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if vals[i] >= 0.0 {
            out.push(poly[i]);
        }
        if (vals[i] > 0.0 && vals[j] < 0.0) || (vals[i] < 0.0 && vals[j] > 0.0) {
            let s = vals[i] / (vals[i] - vals[j]);
            out.push((poly[i].0 + s * (poly[j].0 - poly[i].0), poly[i].1 + s * (poly[j].1 - poly[i].1)));
        }
    }
    out
}

/// Sutherland–Hodgman step keeping {f ≥ 0}.
fn clip(poly: Vec<Pt>, f: impl Fn(&Pt) -> BigRational) -> Vec<Pt> {
    let vals: Vec<BigRational> = poly.iter().map(&f).collect();
    let mut out: Vec<Pt> = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if !vals[i].is_negative() {
            out.push(poly[i].clone());
        }
        if (vals[i].is_positive() && vals[j].is_negative()) || (vals[i].is_negative() && vals[j].is_positive()) {
            let s = &vals[i] / (&vals[i] - &vals[j]);
            out.push(plane::lerp(&poly[i], &poly[j], &s));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Whether a singular point s is genuinely uncovered: the ideal (σ, ρ) with
/// s = σ/ρ is not principal and all its nonzero elements x satisfy N(x) ≥ N(ρ).
fn certify_singular(ring: RingDescriptor, s: &Pt) -> bool {
    let z = Plane::new(ring).to_quad(s);
    let rho = QuadInt::new(z.den().clone(), 0, ring);
    let sigma = z.num().clone();
    let om = QuadInt::omega(ring);
    let gens = [sigma.clone(), &sigma * &om, rho.clone(), &rho * &om];
    let index = lattice_index(&gens);
    let (min_norm, _) = min_norm_in_ideal(&gens);
    min_norm > index && min_norm >= rho.norm()
}

/// Minimal nonzero norm of the ℤ-lattice spanned by `gens`, with a witness.
pub(crate) fn min_norm_in_ideal(gens: &[QuadInt]) -> (BigInt, QuadInt) {
    use crate::homology::matrix::{image_basis, IntMatrix};
    let ring = gens[0].ring();
    let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| vec![g.a.clone(), g.b.clone()]).collect();
    let b = image_basis(&IntMatrix::from_columns(2, &cols));
    let mut u = QuadInt::new(b[(0, 0)].clone(), b[(1, 0)].clone(), ring);
    let mut v = QuadInt::new(b[(0, 1)].clone(), b[(1, 1)].clone(), ring);
    // Lagrange–Gauss reduction for the norm form
    let bil = |x: &QuadInt, y: &QuadInt| &(x + y).norm() - &x.norm() - &y.norm();
    loop {
        if v.norm() < u.norm() {
            std::mem::swap(&mut u, &mut v);
        }
        let num = bil(&u, &v);
        let den = BigInt::from(2) * u.norm();
        let q = BigRational::new(num, den).round().to_integer();
        if q.is_zero() {
            break;
        }
        v = &v - &u.scale(&q);
        if v.norm() >= u.norm() {
            break;
        }
    }
    (u.norm(), u)
}

const WINDOW_MARGIN: i64 = 2;

/// Floor computed with all hemispheres of norm ≤ `bound`, or the reason it is
/// not yet final.
pub fn floor_with_bound(ring: RingDescriptor, bound: u64) -> std::result::Result<Floor, Attempt> {
    let plane = Plane::new(ring);
    let hs = enumerate_in_window(ring, bound, WINDOW_MARGIN);
    let discs: Vec<Disc> = hs.iter().map(|h| disc_f64(&plane, h)).collect();
    let mut faces = Vec::new();
    for (i, s) in hs.iter().enumerate() {
        if !plane.in_rectangle(&s.center_pt()) {
            continue;
        }
        let others: Vec<&Hemisphere> = hs
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let (a, b) = (&discs[i], &discs[*j]);
                let d = ((a.c.0 - b.c.0).powi(2) + (a.c.1 - b.c.1).powi(2)).sqrt();
                *j != i && d <= a.r + b.r + 1e-9
            })
            .map(|(_, h)| h)
            .collect();
        let poly = power_cell(&plane, s, &others);
        if !poly.is_empty() {
            faces.push(FloorFace { hemisphere: s.clone(), polygon: poly });
        }
    }
    // every vertex must be on or above the floor of its own hemisphere
    let mut min_h: Option<BigRational> = None;
    let mut singular = BTreeSet::new();
    for f in &faces {
        for p in &f.polygon {
            let h = f.hemisphere.height_sq(&plane, p);
            if h.is_negative() {
                return Err(Attempt::Uncovered);
            }
            if h.is_zero() {
                let k = plane.reduce_offset(p);
                singular.insert(plane::unshift(p, &k));
            } else if min_h.as_ref().is_none_or(|m| &h < m) {
                min_h = Some(h);
            }
        }
    }
    for s in &singular {
        if !certify_singular(ring, s) {
            return Err(Attempt::Uncovered);
        }
    }
    let min_h = min_h.expect("floor has a vertex of positive height");
    // hemispheres of norm N have top height 1/N; those with 1/N > min_h matter
    // hemispheres touching a vertex at their top must be included too
    let needed: BigInt = min_h.recip().floor().to_integer();
    let needed = needed.to_u64().unwrap().max(1);
    if needed > bound {
        return Err(Attempt::NeedBound(needed));
    }
    insert_junction_vertices(&plane, &mut faces);
    faces.sort_by(|a, b| a.hemisphere.key().cmp(&b.hemisphere.key()));
    Ok(Floor { ring, norm_bound: bound, faces, hemispheres: hs, min_height_sq: min_h, singular: singular.into_iter().collect() })
}

/// Insert into each polygon edge the vertices of other cells lying inside it,
/// so that adjacent faces share whole edges.
fn insert_junction_vertices(plane: &Plane, faces: &mut [FloorFace]) {
    let mut canon: BTreeSet<Pt> = BTreeSet::new();
    for f in faces.iter() {
        for p in &f.polygon {
            let k = plane.reduce_offset(p);
            canon.insert(plane::unshift(p, &k));
        }
    }
    let canon_f: Vec<(Pt, (f64, f64))> = canon.iter().map(|p| (p.clone(), (p.0.to_f64().unwrap(), p.1.to_f64().unwrap()))).collect();
    for f in faces.iter_mut() {
        let mut out = Vec::new();
        let n = f.polygon.len();
        for i in 0..n {
            let a = &f.polygon[i];
            let b = &f.polygon[(i + 1) % n];
            out.push(a.clone());
            let af = (a.0.to_f64().unwrap(), a.1.to_f64().unwrap());
            let bf = (b.0.to_f64().unwrap(), b.1.to_f64().unwrap());
            let mut extra: Vec<(BigRational, Pt)> = Vec::new();
            let ka = plane.reduce_offset(a);
            for (p, pf) in &canon_f {
                for db in -2i64..=2 {
                    for da in -3i64..=3 {
                        let kx = (pf.0 + (ka.0.to_f64().unwrap() + da as f64), pf.1 + (ka.1.to_f64().unwrap() + db as f64));
                        // quick reject in coordinates
                        let lo0 = af.0.min(bf.0) - 1e-9;
                        let hi0 = af.0.max(bf.0) + 1e-9;
                        let lo1 = af.1.min(bf.1) - 1e-9;
                        let hi1 = af.1.max(bf.1) + 1e-9;
                        if kx.0 < lo0 || kx.0 > hi0 || kx.1 < lo1 || kx.1 > hi1 {
                            continue;
                        }
                        let k = (&ka.0 + BigInt::from(da), &ka.1 + BigInt::from(db));
                        let q = shift(p, &k);
                        if strictly_inside_segment(&q, a, b) {
                            let d = sub(b, a);
                            let s = if !d.0.is_zero() { (&q.0 - &a.0) / &d.0 } else { (&q.1 - &a.1) / &d.1 };
                            extra.push((s, q));
                        }
                    }
                }
            }
            extra.sort();
            extra.dedup();
            out.extend(extra.into_iter().map(|(_, q)| q));
        }
        f.polygon = out;
    }
}

/// Swan's procedure: raise the norm bound until no vertex can be covered by
/// an unused hemisphere.
pub fn floor_decomposition(ring: RingDescriptor, cap: u64) -> Result<Floor> {
    let mut bound = 1u64;
    loop {
        if bound > cap {
            return Err(Error::ResourceBudgetExceeded { bound, cap });
        }
        match floor_with_bound(ring, bound) {
            Ok(f) => return Ok(f),
            Err(Attempt::Uncovered) => bound += 1 + bound / 4,
            Err(Attempt::NeedBound(b)) => bound = b.max(bound + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_ring;

    fn all_vertex_heights(f: &Floor) -> BTreeSet<BigRational> {
        let plane = Plane::new(f.ring);
        f.faces.iter().flat_map(|x| x.vertices(&plane)).map(|p| p.t_sq).collect()
    }

    /// Common point of three unit hemispheres with the given ω-coordinate
    /// centres, by Cramer's rule on the two radical-line equations.
    fn triple_point_height(m: u64, cs: [(i64, i64); 3]) -> BigRational {
        let plane = Plane::new(make_ring(m).unwrap());
        let c: Vec<Pt> = cs.iter().map(|&(a, b)| (rat(a), rat(b))).collect();
        // |z − c_i|² = |z − c_0|²  ⇔  2·bil(z, c_i − c_0) = q(c_i) − q(c_0)
        let row = |i: usize| {
            let d = sub(&c[i], &c[0]);
            let e1 = (rat(1), rat(0));
            let e2 = (rat(0), rat(1));
            (plane.bil(&e1, &d) * rat(2), plane.bil(&e2, &d) * rat(2), plane.q(&c[i]) - plane.q(&c[0]))
        };
        let (a, b, e) = row(1);
        let (cc, d, f) = row(2);
        let det = &a * &d - &b * &cc;
        let z = ((&e * &d - &b * &f) / &det, (&a * &f - &e * &cc) / &det);
        rat(1) - plane.q(&sub(&z, &c[0]))
    }

    #[test]
    fn gaussian_floor_is_one_unit_hemisphere() {
        let r = make_ring(1).unwrap();
        let f = floor_decomposition(r, 50).unwrap();
        assert_eq!(f.faces.len(), 1);
        assert!(f.faces[0].hemisphere.radius_sq.is_one());
        let h = all_vertex_heights(&f);
        let oracle = triple_point_height(1, [(0, 0), (1, 0), (0, 1)]);
        assert_eq!(oracle, BigRational::new(1.into(), 2.into()));
        assert_eq!(h.iter().next().unwrap(), &oracle);
    }

    #[test]
    fn eisenstein_floor_heights() {
        let r = make_ring(3).unwrap();
        let f = floor_decomposition(r, 50).unwrap();
        let h = all_vertex_heights(&f);
        let oracle = triple_point_height(3, [(0, 0), (1, 0), (0, 1)]);
        assert_eq!(h.iter().next().unwrap(), &oracle);
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn vertices_are_on_or_above_every_hemisphere() {
        for m in [2, 7, 5, 19] {
            let r = make_ring(m).unwrap();
            let f = floor_decomposition(r, 200).unwrap();
            let plane = Plane::new(r);
            for face in &f.faces {
                let vs = face.vertices(&plane);
                for (i, v) in vs.iter().enumerate() {
                    let w = &vs[(i + 1) % vs.len()];
                    let mid = plane::lerp(&face.polygon[i], &face.polygon[(i + 1) % vs.len()], &BigRational::new(1.into(), 2.into()));
                    let midp = lift(&plane, &face.hemisphere, &mid);
                    for h in &f.hemispheres {
                        assert!(!h.strictly_covers(v), "m={m}: vertex {v} under {:?}", h.center);
                        assert!(!h.strictly_covers(&midp));
                    }
                    let _ = w;
                }
            }
        }
    }

    #[test]
    fn termination_is_a_fixpoint() {
        for m in [2, 7, 15] {
            let r = make_ring(m).unwrap();
            let f = floor_decomposition(r, 200).unwrap();
            let g = floor_with_bound(r, 2 * f.norm_bound + 3).unwrap();
            let key = |f: &Floor| f.faces.iter().map(|x| (x.hemisphere.key(), x.polygon.clone())).collect::<Vec<_>>();
            assert_eq!(key(&f), key(&g), "m={m}");
        }
    }

    #[test]
    fn class_number_two_has_singular_points() {
        let r = make_ring(5).unwrap();
        let f = floor_decomposition(r, 200).unwrap();
        assert!(!f.singular.is_empty());
        let r = make_ring(19).unwrap();
        assert!(floor_decomposition(r, 200).unwrap().singular.is_empty());
    }
}
