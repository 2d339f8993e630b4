//! Small permutation models of the six stabiliser types, and identification
//! of concrete stabilisers with them.

use std::collections::BTreeMap;

use crate::arith::GroupElement;
use crate::complex::{FiniteSubgroup, Incidence, IsoType, OrbitComplex};
use crate::error::{Error, Result};

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    pub iso: IsoType,
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    perms: Vec<Vec<u8>>,
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    // (a·b)(x) = a(b(x))
    b.iter().map(|&x| a[x as usize]).collect()
}

impl GroupModel {
    pub fn new(iso: IsoType) -> Self {
        let gens: Vec<Vec<u8>> = match iso {
            IsoType::Trivial => vec![],
            IsoType::C2 => vec![vec![1, 0]],
            IsoType::C3 => vec![vec![1, 2, 0]],
            IsoType::D2 => vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
            IsoType::S3 => vec![vec![1, 0, 2], vec![1, 2, 0]],
            IsoType::A4 => vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]],
        };
        let deg = match iso {
            IsoType::Trivial => 1,
            IsoType::C2 => 2,
            IsoType::C3 | IsoType::S3 => 3,
            _ => 4,
        };
        let id: Vec<u8> = (0..deg).collect();
        let mut set = std::collections::BTreeSet::new();
        set.insert(id.clone());
        let mut stack = vec![id.clone()];
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = compose(&x, g);
                if set.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        // identity first, then the rest in order
        let mut perms: Vec<Vec<u8>> = vec![id.clone()];
        perms.extend(set.into_iter().filter(|p| *p != id));
        let pos: BTreeMap<Vec<u8>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = perms.iter().map(|a| perms.iter().map(|b| pos[&compose(a, b)]).collect()).collect();
        let inv = (0..perms.len()).map(|a| (0..perms.len()).find(|&b| table[a][b] == 0).unwrap()).collect();
        let g = GroupModel { iso, table, inv, perms };
        debug_assert_eq!(g.order(), iso.order());
        g
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The permutation realising an element.
    pub fn permutation(&self, a: usize) -> &[u8] {
        &self.perms[a]
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            cls.sort();
            cls.dedup();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls);
        }
        out
    }

    /// Checks that `map` is an injective homomorphism from `src` into self.
    pub fn is_embedding(&self, src: &GroupModel, map: &[usize]) -> bool {
        let n = src.order();
        let mut img: Vec<usize> = map.to_vec();
        img.sort();
        img.dedup();
        img.len() == n && (0..n).all(|a| (0..n).all(|b| map[src.mul(a, b)] == self.mul(map[a], map[b])))
    }
}

/// A concrete stabiliser together with an isomorphism onto its model.
#[derive(Clone, Debug)]
pub struct Identified {
    pub model: GroupModel,
    /// Model index of the i-th (sorted) element of the concrete group.
    pub to_model: Vec<usize>,
}

impl Identified {
    pub fn index_of(&self, g: &FiniteSubgroup, x: &GroupElement) -> Option<usize> {
        g.elements().binary_search(x).ok().map(|i| self.to_model[i])
    }
}

fn generators(g: &FiniteSubgroup) -> Vec<usize> {
    let els = g.elements();
    let id = GroupElement::identity(els[0].ring());
    let mut gens: Vec<usize> = Vec::new();
    let mut span = FiniteSubgroup::generated(&[], id.clone(), 1).unwrap();
    for (i, x) in els.iter().enumerate() {
        if span.contains(x) {
            continue;
        }
        gens.push(i);
        let gs: Vec<GroupElement> = gens.iter().map(|&j| els[j].clone()).collect();
        span = FiniteSubgroup::generated(&gs, id.clone(), els.len()).expect("inside a finite group");
    }
    gens
}

/// Find an isomorphism from a concrete finite subgroup onto the model of its type.
pub fn identify(g: &FiniteSubgroup, iso: IsoType) -> Result<Identified> {
    let model = GroupModel::new(iso);
    let els = g.elements();
    let n = els.len();
    if n != model.order() {
        return Err(Error::UnknownType { order: n, exponent: g.exponent() });
    }
    let table: Vec<Vec<usize>> = els.iter().map(|a| els.iter().map(|b| els.binary_search(&a.mul(b)).expect("closed")).collect()).collect();
    let id = els.iter().position(|x| x.is_identity()).ok_or(Error::NotASubgroup)?;
    let gens = generators(g);
    let k = gens.len();
    let mut choice = vec![0usize; k];
    loop {
        if let Some(map) = extend(&table, id, &gens, &choice, &model) {
            return Ok(Identified { model, to_model: map });
        }
        // next tuple of images
        let mut i = 0;
        loop {
            if i == k {
                return Err(Error::Internal(format!("no isomorphism onto the {} model", iso)));
            }
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Identify the stabiliser of every orbit cell with its model.
pub fn identify_cells(complex: &OrbitComplex) -> Result<[Vec<Identified>; 3]> {
    let mut ident: [Vec<Identified>; 3] = Default::default();
    for d in 0..3 {
        for c in &complex.cells[d] {
            ident[d].push(identify(&c.stabiliser, c.iso_type)?);
        }
    }
    Ok(ident)
}

/// The inclusion of stabilisers attached to an incidence of the i-th d-cell,
/// as a map of model indices, checked to be an embedding.
pub fn incidence_embedding(complex: &OrbitComplex, ident: &[Vec<Identified>; 3], d: usize, i: usize, inc: &Incidence) -> Result<Vec<usize>> {
    let imgs = complex.incidence_map(d, i, inc)?;
    let src = &ident[d][i];
    let dst = &ident[d - 1][inc.face];
    let face_stab = &complex.cells[d - 1][inc.face].stabiliser;
    let mut phi = vec![0; src.model.order()];
    for (k, x) in imgs.iter().enumerate() {
        phi[src.to_model[k]] = dst.index_of(face_stab, x).ok_or(Error::NotASubgroup)?;
    }
    if !dst.model.is_embedding(&src.model, &phi) {
        return Err(Error::NotASubgroup);
    }
    Ok(phi)
}

/// A small generating set, chosen greedily in index order.
pub fn model_generators(g: &GroupModel) -> Vec<usize> {
    let n = g.order();
    let mut gens = Vec::new();
    let mut span = vec![true].into_iter().chain(std::iter::repeat_n(false, n - 1)).collect::<Vec<bool>>();
    for x in 1..n {
        if span[x] {
            continue;
        }
        gens.push(x);
        let mut stack: Vec<usize> = (0..n).filter(|&y| span[y]).collect();
        while let Some(y) = stack.pop() {
            for &s in &gens {
                let z = g.mul(y, s);
                if !span[z] {
                    span[z] = true;
                    stack.push(z);
                }
            }
        }
    }
    gens
}

fn extend(table: &[Vec<usize>], id: usize, gens: &[usize], imgs: &[usize], model: &GroupModel) -> Option<Vec<usize>> {
    let n = table.len();
    let mut map = vec![usize::MAX; n];
    map[id] = 0;
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for (g, &im) in gens.iter().zip(imgs) {
            let y = table[x][*g];
            let v = model.mul(map[x], im);
            if map[y] == usize::MAX {
                map[y] = v;
                stack.push(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    let mut seen = vec![false; n];
    for &v in &map {
        if seen[v] {
            return None;
        }
        seen[v] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if map[table[a][b]] != model.mul(map[a], map[b]) {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_ring, UhsPoint};
    use num_rational::BigRational;

    #[test]
    fn models_have_the_right_shape() {
        for t in IsoType::ALL {
            let g = GroupModel::new(t);
            assert_eq!(g.order(), t.order());
            let classes = g.conjugacy_classes().len();
            let expected = [1, 2, 3, 4, 3, 4][t.index()];
            assert_eq!(classes, expected, "{t}");
        }
        let a4 = GroupModel::new(IsoType::A4);
        assert!((0..12).all(|a| a4.element_order(a) != 6));
    }

    #[test]
    fn corner_stabiliser_is_identified() {
        let r = make_ring(1).unwrap();
        let h = BigRational::new(1.into(), 2.into());
        let p = UhsPoint::from_coords(h.clone(), h.clone(), h, r);
        let g = FiniteSubgroup::from_elements(crate::complex::search::pointwise_stabiliser(&[p]).unwrap()).unwrap();
        let id = identify(&g, IsoType::A4).unwrap();
        let els = g.elements();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let k = els.binary_search(&a.mul(b)).unwrap();
                assert_eq!(id.to_model[k], id.model.mul(id.to_model[i], id.to_model[j]));
            }
        }
    }
}
