use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{GroupElement, QuadRat};
use crate::complex::{FiniteSubgroup, IsoType, OrbitComplex};
use crate::error::{Error, Result};

/// Number of orbits of ℤ/ℓ-edges at a vertex with the given stabiliser.
pub fn expected_count(t: IsoType, l: u64) -> usize {
    let row: [usize; 6] = match l {
        2 => [0, 2, 0, 3, 2, 1],
        3 => [0, 0, 2, 0, 1, 2],
        _ => [0; 6],
    };
    row[t.index()]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityRow {
    pub vertex: usize,
    pub iso_type: IsoType,
    pub l: u64,
    /// Ends of ℓ-edge orbits of the complex at the vertex.
    pub edge_ends: usize,
    /// Orbits of rotation axes leaving the vertex towards a cusp, outside
    /// the 2-dimensional complex.
    pub transverse: usize,
    pub expected: usize,
}

impl RigidityRow {
    pub fn count(&self) -> usize {
        self.edge_ends + self.transverse
    }

    pub fn passes(&self) -> bool {
        self.count() == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rows: Vec<RigidityRow>,
}

impl RigidityReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.passes())
    }

    pub fn failures(&self) -> Vec<&RigidityRow> {
        self.rows.iter().filter(|r| !r.passes()).collect()
    }
}

fn cyclic_subgroups_of_order(g: &FiniteSubgroup, l: usize) -> Vec<Vec<GroupElement>> {
    let id = GroupElement::identity(g.elements()[0].ring());
    let mut out: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    for x in g.elements_of_order(l) {
        let c = FiniteSubgroup::generated(&[x], id.clone(), l).expect("cyclic of order l");
        out.insert(c.elements().to_vec());
    }
    out.into_iter().collect()
}

/// Orbits under the stabiliser of pairs (cyclic subgroup of order ℓ, cusp
/// next to the vertex fixed by it).
fn transverse_rays(complex: &OrbitComplex, v: usize, l: usize) -> Result<usize> {
    let cell = &complex.cells[0][v];
    if cell.ideal || cell.stabiliser.order() % l != 0 {
        return Ok(0);
    }
    let mut cusps: Vec<Option<QuadRat>> = vec![None];
    cusps.extend(cell.cusps.iter().cloned().map(Some));
    let subgroups = cyclic_subgroups_of_order(&cell.stabiliser, l);
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, c) in subgroups.iter().enumerate() {
        let gen = c.iter().find(|x| !x.is_identity()).expect("nontrivial");
        for (j, e) in cusps.iter().enumerate() {
            if gen.act_boundary(e.as_ref()) == *e {
                pairs.insert((i, j));
            }
        }
    }
    let mut orbits = 0;
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &p in &pairs {
        if seen.contains(&p) {
            continue;
        }
        orbits += 1;
        for h in cell.stabiliser.elements() {
            let mut conj: Vec<GroupElement> = subgroups[p.0].iter().map(|x| x.conjugate_by(&h.inverse())).collect();
            conj.sort();
            let i = subgroups.iter().position(|s| *s == conj).ok_or(Error::NotASubgroup)?;
            let img = h.act_boundary(cusps[p.1].as_ref());
            let j = cusps.iter().position(|e| *e == img).ok_or_else(|| Error::Internal(format!("vertex {v}: stabiliser moves a nearest cusp away")))?;
            seen.insert((i, j));
        }
    }
    Ok(orbits)
}

/// Count, for every vertex orbit and ℓ ∈ {2, 3}, the orbits of ℤ/ℓ-edges
/// at the vertex, and compare with the count forced by its stabiliser type.
pub fn verify_rigidity_counts(complex: &OrbitComplex) -> Result<RigidityReport> {
    let mut rows = Vec::new();
    for l in [2u64, 3] {
        let mut ends = vec![0usize; complex.cells[0].len()];
        for e in &complex.cells[1] {
            if e.stabiliser.order() as u64 % l == 0 {
                for b in &e.boundary {
                    ends[b.face] += 1;
                }
            }
        }
        for (v, cell) in complex.cells[0].iter().enumerate() {
            rows.push(RigidityRow {
                vertex: v,
                iso_type: cell.iso_type,
                l,
                edge_ends: ends[v],
                transverse: transverse_rays(complex, v, l as usize)?,
                expected: expected_count(cell.iso_type, l),
            });
        }
    }
    Ok(RigidityReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::group::GroupModel;

    /// Half-axes up to conjugacy: a subgroup of prime order ℓ contributes one
    /// orbit when its normaliser is larger than itself (some element turns
    /// the axis over), two otherwise.
    fn model_count(t: IsoType, l: usize) -> usize {
        let g = GroupModel::new(t);
        let n = g.order();
        let subgroup = |x: usize| {
            let mut s = vec![0, x];
            let mut y = g.mul(x, x);
            while y != 0 {
                s.push(y);
                y = g.mul(y, x);
            }
            s.sort();
            s.dedup();
            s
        };
        let mut subs: Vec<Vec<usize>> = (1..n).filter(|&x| g.element_order(x) == l).map(subgroup).collect();
        subs.sort();
        subs.dedup();
        let conj = |s: &Vec<usize>, h: usize| {
            let mut c: Vec<usize> = s.iter().map(|&x| g.mul(g.mul(h, x), g.inv(h))).collect();
            c.sort();
            c
        };
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for s in &subs {
            if seen.contains(s) {
                continue;
            }
            for h in 0..n {
                seen.insert(conj(s, h));
            }
            let normaliser = (0..n).filter(|&h| conj(s, h) == *s).count();
            total += if normaliser > s.len() { 1 } else { 2 };
        }
        total
    }

    #[test]
    fn lemma_table_matches_group_structure() {
        for t in IsoType::ALL {
            for l in [2usize, 3] {
                assert_eq!(expected_count(t, l as u64), model_count(t, l), "{t} at {l}");
            }
        }
        assert_eq!(expected_count(IsoType::A4, 5), 0);
    }
}
