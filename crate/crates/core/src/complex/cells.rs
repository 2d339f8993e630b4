//! Cells of the floor up to translation, and the group elements that carry
//! one floor cell onto another.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::arith::{unit_group, GroupElement, QuadInt, QuadRat, RingDescriptor, UhsPoint};
use crate::error::{Error, Result};
use crate::polyhedron::plane::{twice_area, Plane, Pt};
use crate::polyhedron::Hemisphere;

/// A convex polygon of the floor on its supporting hemisphere, counterclockwise.
#[derive(Clone, Debug)]
pub struct Polygon {
    pub support: Hemisphere,
    pub vertices: Vec<UhsPoint>,
}

/// An element carrying a cell onto the cell `target` of the same dimension.
#[derive(Clone, Debug)]
pub struct Relation {
    pub target: usize,
    pub element: GroupElement,
}

pub(crate) fn translate(p: &UhsPoint, k: &QuadInt) -> UhsPoint {
    UhsPoint::new(&p.z + &QuadRat::from_int(k.clone()), p.t_sq.clone())
}

/// The k ∈ O with p + k in the fundamental rectangle.
pub(crate) fn reducing_offset(plane: &Plane, p: &UhsPoint) -> QuadInt {
    let (ka, kb) = plane.reduce_offset(&p.z.coords());
    -&QuadInt::new(ka, kb, plane.ring)
}

fn projections(vs: &[UhsPoint]) -> Vec<Pt> {
    vs.iter().map(|v| v.z.coords()).collect()
}

/// Canonical representative of the translation class of a cell given by its
/// vertices, with the k such that the representative is the cell moved by k.
///
/// A polygon is oriented counterclockwise and started at one of its vertices;
/// an edge is started at one endpoint. The first vertex always lies in the
/// rectangle and the lexicographically least choice wins.
pub fn canonical(plane: &Plane, dim: usize, vs: &[UhsPoint]) -> (Vec<UhsPoint>, QuadInt) {
    let mut vs = vs.to_vec();
    if dim == 2 && twice_area(&projections(&vs)).is_negative() {
        vs.reverse();
    }
    let n = vs.len();
    let mut best: Option<(Vec<UhsPoint>, QuadInt)> = None;
    let starts = if dim == 0 { 1 } else { n };
    for i in 0..starts {
        let k = reducing_offset(plane, &vs[i]);
        let seq: Vec<UhsPoint> = match dim {
            1 => vec![translate(&vs[i], &k), translate(&vs[1 - i], &k)],
            _ => (0..n).map(|j| translate(&vs[(i + j) % n], &k)).collect(),
        };
        if best.as_ref().is_none_or(|(b, _)| &seq < b) {
            best = Some((seq, k));
        }
    }
    best.unwrap()
}

/// The floor cell structure modulo translations.
#[derive(Clone, Debug)]
pub struct FloorCells {
    pub ring: RingDescriptor,
    pub plane: Plane,
    /// Canonical vertex lists, sorted, per dimension.
    pub cells: [Vec<Vec<UhsPoint>>; 3],
    /// Supporting hemisphere of each 2-cell, in its canonical position.
    pub supports: Vec<Hemisphere>,
    index: [BTreeMap<Vec<UhsPoint>, usize>; 3],
    hemispheres: Vec<Hemisphere>,
    hemi_f64: Vec<[f64; 3]>,
    rotations: Vec<GroupElement>,
}

impl FloorCells {
    /// Cells of a polygon decomposition; `hemispheres` must contain every
    /// hemisphere through a point over the rectangle.
    pub fn new(ring: RingDescriptor, polygons: &[Polygon], hemispheres: &[Hemisphere]) -> Self {
        let plane = Plane::new(ring);
        let mut sets: [BTreeMap<Vec<UhsPoint>, Option<Hemisphere>>; 3] = Default::default();
        for p in polygons {
            let n = p.vertices.len();
            for i in 0..n {
                let v = &p.vertices[i];
                let w = &p.vertices[(i + 1) % n];
                sets[0].entry(canonical(&plane, 0, std::slice::from_ref(v)).0).or_insert(None);
                sets[1].entry(canonical(&plane, 1, &[v.clone(), w.clone()]).0).or_insert(None);
            }
            let (key, k) = canonical(&plane, 2, &p.vertices);
            sets[2].entry(key).or_insert(Some(p.support.translated(&k)));
        }
        let mut cells: [Vec<Vec<UhsPoint>>; 3] = Default::default();
        let mut index: [BTreeMap<Vec<UhsPoint>, usize>; 3] = Default::default();
        let mut supports = Vec::new();
        for d in 0..3 {
            for (i, (key, s)) in std::mem::take(&mut sets[d]).into_iter().enumerate() {
                index[d].insert(key.clone(), i);
                cells[d].push(key);
                if let Some(s) = s {
                    supports.push(s);
                }
            }
        }
        let hemi_f64 = hemispheres
            .iter()
            .map(|h| {
                let (x, y) = h.center.to_f64();
                [x, y, crate::arith::quad::rat_to_f64(&h.radius_sq)]
            })
            .collect();
        let mut rotations: Vec<GroupElement> = unit_group(ring).iter().map(GroupElement::unit_rotation).collect();
        rotations.sort();
        rotations.dedup();
        FloorCells { ring, plane, cells, supports, index, hemispheres: hemispheres.to_vec(), hemi_f64, rotations }
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells[dim].len()
    }

    pub fn lookup(&self, dim: usize, vs: &[UhsPoint]) -> Option<(usize, QuadInt)> {
        let (key, k) = canonical(&self.plane, dim, vs);
        self.index[dim].get(&key).map(|&i| (i, k))
    }

    /// Hemispheres containing every given point; the first point must lie
    /// over the rectangle.
    pub fn hemispheres_through(&self, vs: &[UhsPoint]) -> Vec<&Hemisphere> {
        let p = vs[0].to_f64();
        let t2 = p[2] * p[2];
        self.hemispheres
            .iter()
            .zip(&self.hemi_f64)
            .filter(|(_, c)| {
                let e = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + t2 - c[2];
                e.abs() <= 1e-6 * c[2].max(1e-12)
            })
            .map(|(h, _)| h)
            .filter(|h| vs.iter().all(|v| h.contains(v)))
            .collect()
    }

    /// Elements γ with γ⁻¹(∞) ∈ {∞} ∪ {centres of hemispheres through the
    /// cell}, up to translation; every element mapping the cell into the
    /// floor is a translate of one of these.
    fn base_elements(&self, vs: &[UhsPoint]) -> Vec<GroupElement> {
        let mut out = self.rotations.clone();
        for h in self.hemispheres_through(vs) {
            let g = h.inversion_element();
            for r in &self.rotations {
                out.push(r.mul(&g));
            }
        }
        out
    }

    /// All elements carrying cell `i` of dimension `dim` onto a floor cell,
    /// normalised so that the image is a canonical cell.
    pub fn relations(&self, dim: usize, i: usize) -> Result<Vec<Relation>> {
        let vs = &self.cells[dim][i];
        let mut out = Vec::new();
        for g in self.base_elements(vs) {
            let img: Vec<UhsPoint> = vs.iter().map(|v| g.act(v)).collect::<Result<_>>()?;
            let (target, k) = self.lookup(dim, &img).ok_or_else(|| {
                Error::Internal(format!("image of floor {dim}-cell {i} under {g} is not a floor cell"))
            })?;
            let element = if k.is_zero() { g } else { GroupElement::translation(k).mul(&g) };
            out.push(Relation { target, element });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_ring;
    use crate::polyhedron::{floor::lift, floor_decomposition};

    fn polygons(m: u64) -> (RingDescriptor, Vec<Polygon>, Vec<Hemisphere>) {
        let r = make_ring(m).unwrap();
        let f = floor_decomposition(r, 400).unwrap();
        let plane = Plane::new(r);
        let ps = f
            .faces
            .iter()
            .map(|x| Polygon { support: x.hemisphere.clone(), vertices: x.polygon.iter().map(|p| lift(&plane, &x.hemisphere, p)).collect() })
            .collect();
        (r, ps, f.hemispheres)
    }

    #[test]
    fn canonical_form_is_translation_invariant() {
        let (r, ps, _) = polygons(7);
        let plane = Plane::new(r);
        for p in &ps {
            let (key, _) = canonical(&plane, 2, &p.vertices);
            for k in [QuadInt::new(1, 0, r), QuadInt::new(-2, 3, r)] {
                let moved: Vec<UhsPoint> = p.vertices.iter().rev().map(|v| translate(v, &k)).collect();
                assert_eq!(canonical(&plane, 2, &moved).0, key);
            }
        }
    }

    /// Every relation really maps the cell onto its target, and the images of
    /// all cells land in the table.
    #[test]
    fn relations_map_cells_to_cells() {
        for m in [1, 2, 3, 7, 5] {
            let (r, ps, hs) = polygons(m);
            let fc = FloorCells::new(r, &ps, &hs);
            for d in 0..3 {
                for i in 0..fc.count(d) {
                    let rels = fc.relations(d, i).unwrap();
                    assert!(!rels.is_empty());
                    for rel in rels {
                        let img: Vec<UhsPoint> = fc.cells[d][i].iter().map(|v| rel.element.act(v).unwrap()).collect();
                        let mut a = img.clone();
                        a.sort();
                        let mut b = fc.cells[d][rel.target].clone();
                        b.sort();
                        assert_eq!(a, b, "m={m} dim={d}");
                    }
                }
            }
        }
    }
}
