//! Face pairings of the floor, cusps, and exports of the polyhedron.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use super::floor::Floor;
use super::plane::Plane;
use crate::arith::{GroupElement, QuadInt, QuadRat, RingDescriptor, UhsPoint};
use crate::complex::OrbitComplex;
use crate::error::{Error, Result};

/// An element carrying one floor face onto another.
#[derive(Clone, Debug)]
pub struct FacePairing {
    pub face: usize,
    pub partner: usize,
    pub element: GroupElement,
}

/// The floor faces with their lifted vertices, the pairings among them and
/// the two translations pairing the vertical walls.
#[derive(Clone, Debug)]
pub struct FundamentalPolyhedron {
    pub ring: RingDescriptor,
    pub faces: Vec<Vec<UhsPoint>>,
    pub pairings: Vec<FacePairing>,
    pub walls: [GroupElement; 2],
}

fn vertex_set(vs: &[UhsPoint]) -> BTreeSet<UhsPoint> {
    vs.iter().cloned().collect()
}

/// Pair every floor face S with the face onto which the inversion element of
/// S, followed by a translation, maps it; each pairing is checked on all
/// vertices.
pub fn face_pairings(floor: &Floor) -> Result<FundamentalPolyhedron> {
    let ring = floor.ring;
    let plane = Plane::new(ring);
    let faces: Vec<Vec<UhsPoint>> = floor.faces.iter().map(|f| f.vertices(&plane)).collect();
    let mut pairings = Vec::new();
    for (i, f) in floor.faces.iter().enumerate() {
        let g = f.hemisphere.inversion_element();
        let image_centre = QuadRat::from_int(g.a.clone()).div(&QuadRat::from_int(g.c.clone()));
        let k = plane.reduce_offset(&image_centre.coords());
        let shift = GroupElement::translation(-plane.offset_element(&k));
        let element = shift.mul(&g);
        let imgs: BTreeSet<UhsPoint> = faces[i].iter().map(|v| element.act(v)).collect::<Result<_>>()?;
        let j = faces.iter().position(|w| vertex_set(w) == imgs).ok_or(Error::UnpairedFace(i))?;
        pairings.push(FacePairing { face: i, partner: j, element });
    }
    let walls = [GroupElement::translation(QuadInt::one(ring)), GroupElement::translation(QuadInt::omega(ring))];
    Ok(FundamentalPolyhedron { ring, faces, pairings, walls })
}

/// Number of reduced positive definite binary quadratic forms of the field
/// discriminant, which is the class number.
pub fn class_number(ring: RingDescriptor) -> usize {
    let m = ring.m() as i64;
    let disc = if m % 4 == 3 { -m } else { -4 * m };
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

/// One cusp per ideal class: ∞ (as `None`) and the ideal vertices of the
/// orbit complex.
pub fn cusp_set(complex: &OrbitComplex) -> Vec<Option<QuadRat>> {
    let mut out = vec![None];
    out.extend(complex.cells[0].iter().filter(|c| c.ideal).map(|c| Some(c.vertices[0].z.clone())));
    out
}

#[derive(Serialize)]
struct JsonVertex {
    z: (String, String, String),
    t_sq: (String, String),
}

#[derive(Serialize)]
struct JsonPairing {
    face: usize,
    partner: usize,
    element: [(String, String); 4],
}

#[derive(Serialize)]
struct JsonPolyhedron {
    schema: &'static str,
    m: u64,
    vertices: Vec<JsonVertex>,
    faces: Vec<Vec<usize>>,
    pairings: Vec<JsonPairing>,
    walls: Vec<[(String, String); 4]>,
}

fn entries(g: &GroupElement) -> [(String, String); 4] {
    let e = |x: &QuadInt| (x.a.to_string(), x.b.to_string());
    [e(&g.a), e(&g.b), e(&g.c), e(&g.d)]
}

impl FundamentalPolyhedron {
    /// Distinct vertices in sorted order, and each face as indices into them.
    pub fn indexed(&self) -> (Vec<UhsPoint>, Vec<Vec<usize>>) {
        let all: BTreeSet<UhsPoint> = self.faces.iter().flatten().cloned().collect();
        let vs: Vec<UhsPoint> = all.into_iter().collect();
        let faces = self.faces.iter().map(|f| f.iter().map(|v| vs.binary_search(v).expect("listed")).collect()).collect();
        (vs, faces)
    }

    pub fn to_json(&self) -> String {
        let (vs, faces) = self.indexed();
        let vertices = vs
            .iter()
            .map(|v| JsonVertex {
                z: (v.z.num().a.to_string(), v.z.num().b.to_string(), v.z.den().to_string()),
                t_sq: (v.t_sq.numer().to_string(), v.t_sq.denom().to_string()),
            })
            .collect();
        let doc = JsonPolyhedron {
            schema: "bianchi-polyhedron/1",
            m: self.ring.m(),
            vertices,
            faces,
            pairings: self.pairings.iter().map(|p| JsonPairing { face: p.face, partner: p.partner, element: entries(&p.element) }).collect(),
            walls: self.walls.iter().map(entries).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialisable")
    }

    /// Wavefront OBJ with coordinates (Re z, Im z, t) as floats.
    pub fn to_obj(&self) -> String {
        let (vs, faces) = self.indexed();
        let mut s = format!("# floor of the fundamental polyhedron, m = {}\n", self.ring.m());
        for v in &vs {
            let [x, y, t] = v.to_f64();
            let _ = writeln!(s, "v {x:.12} {y:.12} {t:.12}");
        }
        for f in &faces {
            let idx: Vec<String> = f.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(s, "f {}", idx.join(" "));
        }
        s
    }
}

/// Exact check that a point lies on or above the given hemisphere.
pub fn on_or_above(h: &super::Hemisphere, p: &UhsPoint) -> bool {
    !h.excess(p).is_negative()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_ring;
    use crate::polyhedron::floor_decomposition;

    #[test]
    fn class_numbers() {
        for (m, h) in [(1, 1), (2, 1), (3, 1), (5, 2), (6, 2), (14, 4), (15, 2), (21, 4), (23, 3), (47, 5), (163, 1)] {
            assert_eq!(class_number(make_ring(m).unwrap()), h, "m = {m}");
        }
    }

    #[test]
    fn pairings_are_involutive_bijections() {
        for m in [1, 2, 3, 7, 15] {
            let floor = floor_decomposition(make_ring(m).unwrap(), 4000).unwrap();
            let p = face_pairings(&floor).unwrap();
            assert_eq!(p.pairings.len(), p.faces.len());
            for f in &p.pairings {
                assert!(f.element.det().is_one());
                let back = &p.pairings[f.partner];
                assert_eq!(back.partner, f.face, "m = {m}");
                let imgs: BTreeSet<UhsPoint> = p.faces[f.partner].iter().map(|v| f.element.inverse().act(v).unwrap()).collect();
                assert_eq!(imgs, vertex_set(&p.faces[f.face]));
            }
        }
    }

    #[test]
    fn exports_are_well_formed() {
        let floor = floor_decomposition(make_ring(1).unwrap(), 4000).unwrap();
        let p = face_pairings(&floor).unwrap();
        let (vs, faces) = p.indexed();
        let obj = p.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), vs.len());
        for l in obj.lines().filter(|l| l.starts_with("f ")) {
            assert!(l[2..].split(' ').all(|i| (1..=vs.len()).contains(&i.parse().unwrap())));
        }
        let json: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(json["schema"], "bianchi-polyhedron/1");
        assert_eq!(json["faces"].as_array().unwrap().len(), faces.len());
    }
}
