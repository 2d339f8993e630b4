//! Orbits and stabilisers of floor cells, equivariant refinement, and the
//! orbit complex with its boundary data.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cells::{FloorCells, Polygon};
use super::finite::{FiniteSubgroup, IsoType};
use crate::arith::{GroupElement, QuadRat, RingDescriptor, UhsPoint};
use crate::error::{Error, Result};
use crate::polyhedron::plane::{Plane, Pt};
use crate::polyhedron::{Floor, Hemisphere};

/// Orbit data of one floor cell.
#[derive(Clone, Debug)]
pub struct CellInfo {
    /// Elements preserving the cell; trivial for an ideal vertex.
    pub setwise: FiniteSubgroup,
    pub pointwise: FiniteSubgroup,
    pub orbit: usize,
    /// Carries this cell onto its orbit representative.
    pub to_rep: GroupElement,
    pub ideal: bool,
}

/// Floor cells together with their orbit data.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub cells: FloorCells,
    pub info: [Vec<CellInfo>; 3],
    /// Representative cell index of each orbit.
    pub reps: [Vec<usize>; 3],
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn analyse(cells: FloorCells) -> Result<Analysis> {
    let ring = cells.ring;
    let id = GroupElement::identity(ring);
    let mut info: [Vec<CellInfo>; 3] = Default::default();
    let mut reps: [Vec<usize>; 3] = Default::default();
    for d in 0..3 {
        let n = cells.count(d);
        let mut adj: Vec<Vec<(usize, GroupElement)>> = vec![Vec::new(); n];
        let mut stab: Vec<Vec<GroupElement>> = vec![Vec::new(); n];
        for i in 0..n {
            for rel in cells.relations(d, i)? {
                if rel.target == i {
                    stab[i].push(rel.element.clone());
                }
                // g·i = j, so j reaches i through g⁻¹
                adj[rel.target].push((i, rel.element.inverse()));
                adj[i].push((rel.target, rel.element));
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for (j, _) in &adj[i] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, *j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut to_rep: Vec<Option<GroupElement>> = vec![None; n];
        let mut orbit_of = vec![usize::MAX; n];
        for r in 0..n {
            if find(&mut parent, r) != r {
                continue;
            }
            let o = reps[d].len();
            reps[d].push(r);
            to_rep[r] = Some(id.clone());
            orbit_of[r] = o;
            let mut queue = VecDeque::from([r]);
            while let Some(i) = queue.pop_front() {
                let phi = to_rep[i].clone().unwrap();
                for (j, g) in &adj[i] {
                    // g·i = j, so φ g⁻¹ carries j to the representative
                    if to_rep[*j].is_none() {
                        to_rep[*j] = Some(phi.mul(&g.inverse()));
                        orbit_of[*j] = o;
                        queue.push_back(*j);
                    }
                }
            }
        }
        for i in 0..n {
            let vs = &cells.cells[d][i];
            let ideal = d == 0 && vs[0].is_ideal();
            let (setwise, pointwise) = if ideal {
                let t = FiniteSubgroup::generated(&[], id.clone(), 1).unwrap();
                (t.clone(), t)
            } else {
                let set = FiniteSubgroup::from_elements(stab[i].clone())
                    .map_err(|_| Error::Internal(format!("setwise stabiliser of {d}-cell {i} is not a group")))?;
                let pw: Vec<GroupElement> = set
                    .elements()
                    .iter()
                    .filter(|g| vs.iter().all(|v| g.act(v).as_ref() == Ok(v)))
                    .cloned()
                    .collect();
                (set, FiniteSubgroup::from_elements(pw)?)
            };
            info[d].push(CellInfo { setwise, pointwise, orbit: orbit_of[i], to_rep: to_rep[i].clone().unwrap(), ideal });
        }
    }
    Ok(Analysis { cells, info, reps })
}

fn lift(plane: &Plane, h: &Hemisphere, p: &Pt) -> UhsPoint {
    UhsPoint::new(plane.to_quad(p), h.height_sq(plane, p))
}

fn average(ps: &[Pt]) -> Pt {
    let n = BigRational::from_integer(ps.len().into());
    let mut s = (BigRational::zero(), BigRational::zero());
    for p in ps {
        s.0 += &p.0;
        s.1 += &p.1;
    }
    (s.0 / &n, s.1 / n)
}

/// One equivariant subdivision step: flipped edges are cut at their
/// midpoints and faces with nontrivial setwise stabiliser are coned from
/// their barycentres. Both points are taken in the projection and lifted to
/// the supporting hemisphere, where every relating element acts affinely.
/// Returns `None` if the complex is already rigid.
pub fn refine(an: &Analysis) -> Option<Vec<Polygon>> {
    let fc = &an.cells;
    let plane = &fc.plane;
    let flipped_edge_orbits: Vec<bool> = an.reps[1]
        .iter()
        .map(|&r| an.info[1][r].setwise.order() != an.info[1][r].pointwise.order())
        .collect();
    let rotated_face_orbits: Vec<bool> = an.reps[2].iter().map(|&r| an.info[2][r].setwise.order() > 1).collect();
    if !flipped_edge_orbits.iter().any(|&x| x) && !rotated_face_orbits.iter().any(|&x| x) {
        return None;
    }
    let mut out = Vec::new();
    for (f, vs) in fc.cells[2].iter().enumerate() {
        let s = &fc.supports[f];
        let n = vs.len();
        let mut boundary = Vec::new();
        for j in 0..n {
            let (a, b) = (&vs[j], &vs[(j + 1) % n]);
            boundary.push(a.clone());
            let (e, _) = fc.lookup(1, &[a.clone(), b.clone()]).expect("boundary edge is a cell");
            if flipped_edge_orbits[an.info[1][e].orbit] {
                boundary.push(lift(plane, s, &average(&[a.z.coords(), b.z.coords()])));
            }
        }
        if rotated_face_orbits[an.info[2][f].orbit] {
            let proj: Vec<Pt> = vs.iter().map(|v| v.z.coords()).collect();
            let bary = lift(plane, s, &average(&proj));
            let k = boundary.len();
            for j in 0..k {
                out.push(Polygon { support: s.clone(), vertices: vec![bary.clone(), boundary[j].clone(), boundary[(j + 1) % k].clone()] });
            }
        } else {
            out.push(Polygon { support: s.clone(), vertices: boundary });
        }
    }
    Some(out)
}

/// A face of a cell's boundary: the representative of orbit `face`, moved
/// by `element`, with orientation sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub face: usize,
    pub element: GroupElement,
    pub sign: i32,
}

/// Orbit representative with its stabiliser and boundary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitCell {
    pub dim: usize,
    /// Vertices of the representative; an edge is oriented from the first to
    /// the second, a face counterclockwise in the projection.
    pub vertices: Vec<UhsPoint>,
    pub stabiliser: FiniteSubgroup,
    pub iso_type: IsoType,
    /// A vertex at a singular cusp (class number > 1); its stabiliser is
    /// infinite and recorded as trivial.
    pub ideal: bool,
    /// Number of floor cells (up to translation) in the orbit.
    pub floor_cells: usize,
    /// For a vertex: centres of the hemispheres through it. Together with ∞
    /// these are the cusps nearest to the vertex.
    pub cusps: Vec<QuadRat>,
    pub boundary: Vec<Incidence>,
}

/// The refined cell structure modulo Γ: cells in dimensions 0, 1, 2 of the
/// retract formed by the Γ-translates of the floor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitComplex {
    pub ring: RingDescriptor,
    pub cells: [Vec<OrbitCell>; 3],
    /// Number of refinement passes applied.
    pub refinements: usize,
}

/// Summary of a cell for reports.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl OrbitComplex {
    /// Build the refined orbit complex from a floor.
    pub fn from_floor(floor: &Floor) -> Result<Self> {
        let plane = Plane::new(floor.ring);
        let mut polys: Vec<Polygon> = floor
            .faces
            .iter()
            .map(|f| Polygon { support: f.hemisphere.clone(), vertices: f.polygon.iter().map(|p| lift(&plane, &f.hemisphere, p)).collect() })
            .collect();
        let mut passes = 0;
        loop {
            let an = analyse(FloorCells::new(floor.ring, &polys, &floor.hemispheres))?;
            match refine(&an) {
                None => return Self::from_analysis(&an, passes),
                Some(p) if passes < 3 => {
                    polys = p;
                    passes += 1;
                }
                Some(_) => return Err(Error::Internal("refinement does not stabilise".into())),
            }
        }
    }

    pub fn from_analysis(an: &Analysis, refinements: usize) -> Result<Self> {
        let fc = &an.cells;
        let mut cells: [Vec<OrbitCell>; 3] = Default::default();
        let mut counts: [BTreeMap<usize, usize>; 3] = Default::default();
        for d in 0..3 {
            for inf in &an.info[d] {
                *counts[d].entry(inf.orbit).or_default() += 1;
            }
        }
        for d in 0..3 {
            for (o, &r) in an.reps[d].iter().enumerate() {
                let inf = &an.info[d][r];
                if inf.setwise != inf.pointwise {
                    return Err(Error::Internal(format!("{d}-cell {r} is not fixed pointwise by its stabiliser")));
                }
                let vs = fc.cells[d][r].clone();
                let boundary = match d {
                    0 => Vec::new(),
                    1 => {
                        let mut b = Vec::new();
                        for (v, sign) in [(&vs[1], 1), (&vs[0], -1)] {
                            let (i, k) = fc.lookup(0, std::slice::from_ref(v)).ok_or_else(|| Error::Internal("edge endpoint missing".into()))?;
                            let total = an.info[0][i].to_rep.mul(&GroupElement::translation(k));
                            b.push(Incidence { face: an.info[0][i].orbit, element: total.inverse(), sign });
                        }
                        b
                    }
                    _ => {
                        let mut b = Vec::new();
                        let n = vs.len();
                        for j in 0..n {
                            let e = [vs[j].clone(), vs[(j + 1) % n].clone()];
                            let (i, k) = fc.lookup(1, &e).ok_or_else(|| Error::Internal("face edge missing".into()))?;
                            let total = an.info[1][i].to_rep.mul(&GroupElement::translation(k));
                            let rep = &fc.cells[1][an.reps[1][an.info[1][i].orbit]];
                            let start = total.act(&e[0])?;
                            let sign = if start == rep[0] {
                                1
                            } else if start == rep[1] {
                                -1
                            } else {
                                return Err(Error::Internal("gluing element does not match edge".into()));
                            };
                            b.push(Incidence { face: an.info[1][i].orbit, element: total.inverse(), sign });
                        }
                        b
                    }
                };
                let cusps = if d == 0 { fc.hemispheres_through(&vs).iter().map(|h| h.center.clone()).collect() } else { Vec::new() };
                let iso_type = if inf.ideal { IsoType::Trivial } else { inf.pointwise.classify()? };
                cells[d].push(OrbitCell {
                    dim: d,
                    vertices: vs,
                    stabiliser: inf.pointwise.clone(),
                    iso_type,
                    ideal: inf.ideal,
                    floor_cells: counts[d][&o],
                    cusps,
                    boundary,
                });
            }
        }
        Ok(OrbitComplex { ring: fc.ring, cells, refinements })
    }

    pub fn counts(&self) -> CellCounts {
        CellCounts { vertices: self.cells[0].len(), edges: self.cells[1].len(), faces: self.cells[2].len() }
    }

    pub fn has_ideal_vertices(&self) -> bool {
        self.cells[0].iter().any(|c| c.ideal)
    }

    /// Boundary matrix with trivial coefficients from dimension `d` to `d − 1`
    /// (rows: (d−1)-cells, columns: d-cells).
    pub fn boundary_matrix(&self, d: usize) -> crate::homology::IntMatrix {
        let mut m = crate::homology::IntMatrix::zeros(self.cells[d - 1].len(), self.cells[d].len());
        for (j, c) in self.cells[d].iter().enumerate() {
            for inc in &c.boundary {
                m[(inc.face, j)] += num_bigint::BigInt::from(inc.sign);
            }
        }
        m
    }

    /// Σ (−1)^dim / |Γ_σ| over the compact cells.
    pub fn orbifold_euler_characteristic(&self) -> BigRational {
        let mut s = BigRational::zero();
        for d in 0..3 {
            for c in &self.cells[d] {
                let term = BigRational::new(1.into(), c.stabiliser.order().into());
                if d % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
        }
        s
    }

    /// Homomorphism of stabilisers attached to an incidence: the stabiliser
    /// of the cell lies in element·Γ_face·element⁻¹, and h ↦ element⁻¹ h element
    /// lands in the stabiliser of the face representative.
    pub fn incidence_map(&self, d: usize, cell: usize, inc: &Incidence) -> Result<Vec<GroupElement>> {
        let src = &self.cells[d][cell].stabiliser;
        let dst = &self.cells[d - 1][inc.face].stabiliser;
        src.elements()
            .iter()
            .map(|h| {
                let x = h.conjugate_by(&inc.element);
                if dst.contains(&x) {
                    Ok(x)
                } else {
                    Err(Error::NotASubgroup)
                }
            })
            .collect()
    }

    /// Horizontal coordinate of the representative of a vertex orbit.
    pub fn vertex_point(&self, v: usize) -> &UhsPoint {
        &self.cells[0][v].vertices[0]
    }
}
