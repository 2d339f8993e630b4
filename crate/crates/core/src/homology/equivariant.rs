//! The double complex C_p(X) ⊗ P^σ_q over the orbit cells, its spectral
//! sequence pages, and the homology of its total complex.
//!
//! Each orbit cell σ carries a free resolution of its stabiliser model, and
//! D_{p,q} = ⊕_{σ of dim p} (P^σ_q)_{Γ_σ}. The vertical differential is the
//! coinvariant resolution boundary with sign (−1)^p, the horizontal one is
//! built from chain maps over the conjugated inclusions of stabilisers. Since
//! 2-cells have trivial stabilisers, the only correction needed to make the
//! total complex a resolution is a map D_{2,0} → D_{0,1}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::abelian::{chain_homology, AbelianGroup};
use super::fp::FpMatrix;
use super::group::{identify_cells, incidence_embedding, Identified};
use super::matrix::{image_basis, kernel, solve, IntMatrix};
use super::resolution::{coinvariant, ChainMap, Resolution};
use crate::arith::GroupElement;
use crate::complex::{IsoType, OrbitComplex};
use crate::error::{Error, Result};

/// Entries E_{p,q} for p = 0, 1, 2 and q = 0 ..= q_max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedPage {
    pub q_max: usize,
    /// `entries[p][q]`
    pub entries: Vec<Vec<AbelianGroup>>,
}

impl BigradedPage {
    pub fn get(&self, p: usize, q: usize) -> &AbelianGroup {
        &self.entries[p][q]
    }

    /// The ℓ-primary parts of all entries with q ≥ 1.
    pub fn primary_above_bottom(&self, l: u64) -> Vec<Vec<AbelianGroup>> {
        self.entries.iter().map(|col| col[1..].iter().map(|g| g.primary_part(l)).collect()).collect()
    }
}

pub struct DoubleComplex<'a> {
    pub complex: &'a OrbitComplex,
    /// Resolution length: rows q = 0 ..= len are available.
    pub len: usize,
    res: Vec<Resolution>,
    ident: [Vec<Identified>; 3],
    /// For each dimension, cell and incidence: index into `maps`.
    inc_maps: [Vec<Vec<usize>>; 3],
    maps: Vec<ChainMap>,
    d2: Option<IntMatrix>,
}

fn block_offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

impl<'a> DoubleComplex<'a> {
    /// Build resolutions of length `len` and all chain maps. The correction
    /// term is only formed when every vertex has a finite stabiliser.
    pub fn new(complex: &'a OrbitComplex, len: usize) -> Result<Self> {
        let res: Vec<Resolution> = IsoType::ALL.iter().map(|&t| Resolution::for_type(t, len)).collect();
        let ident = identify_cells(complex)?;
        let mut keys: BTreeMap<(usize, usize, Vec<usize>), usize> = BTreeMap::new();
        let mut maps = Vec::new();
        let mut inc_maps: [Vec<Vec<usize>>; 3] = Default::default();
        for d in 1..3 {
            for (i, c) in complex.cells[d].iter().enumerate() {
                let mut row = Vec::new();
                for inc in &c.boundary {
                    let phi = incidence_embedding(complex, &ident, d, i, inc)?;
                    let key = (c.iso_type.index(), complex.cells[d - 1][inc.face].iso_type.index(), phi);
                    let idx = match keys.get(&key) {
                        Some(&k) => k,
                        None => {
                            let m = ChainMap::new(&res[key.0], &res[key.1], &key.2, len)?;
                            maps.push(m);
                            keys.insert(key, maps.len() - 1);
                            maps.len() - 1
                        }
                    };
                    row.push(idx);
                }
                inc_maps[d].push(row);
            }
        }
        let mut dc = DoubleComplex { complex, len, res, ident, inc_maps, maps, d2: None };
        if !complex.has_ideal_vertices() && len >= 1 {
            dc.d2 = Some(dc.correction()?);
        }
        Ok(dc)
    }

    fn resolution(&self, d: usize, i: usize) -> &Resolution {
        &self.res[self.complex.cells[d][i].iso_type.index()]
    }

    /// Rank of (P^σ_q)_{Γ_σ} for the i-th cell of dimension d.
    pub fn rank(&self, d: usize, i: usize, q: usize) -> usize {
        self.resolution(d, i).ranks[q]
    }

    fn offsets(&self, p: usize, q: usize) -> Vec<usize> {
        block_offsets((0..self.complex.cells[p].len()).map(|i| self.rank(p, i, q)))
    }

    /// dim D_{p,q}.
    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p > 2 || q > self.len {
            return 0;
        }
        *self.offsets(p, q).last().unwrap()
    }

    /// Vertical differential D_{p,q} → D_{p,q−1}.
    pub fn vertical(&self, p: usize, q: usize) -> IntMatrix {
        let (rows, cols) = (if q == 0 { 0 } else { self.dim(p, q - 1) }, self.dim(p, q));
        let mut m = IntMatrix::zeros(rows, cols);
        if q == 0 || q > self.len || p > 2 {
            return m;
        }
        let ro = self.offsets(p, q - 1);
        let co = self.offsets(p, q);
        let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for i in 0..self.complex.cells[p].len() {
            let b = self.resolution(p, i).coinvariant_boundary(q);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    if !b[(r, c)].is_zero() {
                        m[(ro[i] + r, co[i] + c)] = &sign * &b[(r, c)];
                    }
                }
            }
        }
        m
    }

    /// Horizontal differential D_{p,q} → D_{p−1,q}.
    pub fn horizontal(&self, p: usize, q: usize) -> IntMatrix {
        if p == 0 {
            return IntMatrix::zeros(0, self.dim(0, q));
        }
        if p > 2 || q > self.len {
            return IntMatrix::zeros(self.dim(p - 1, q), self.dim(p, q));
        }
        let mut m = IntMatrix::zeros(self.dim(p - 1, q), self.dim(p, q));
        let ro = self.offsets(p - 1, q);
        let co = self.offsets(p, q);
        for (i, c) in self.complex.cells[p].iter().enumerate() {
            if self.rank(p, i, q) == 0 {
                continue;
            }
            for (inc, &mi) in c.boundary.iter().zip(&self.inc_maps[p][i]) {
                let f = self.maps[mi].coinvariant(q, self.rank(p - 1, inc.face, q));
                let s = BigInt::from(inc.sign);
                for r in 0..f.rows() {
                    for k in 0..f.cols() {
                        if !f[(r, k)].is_zero() {
                            m[(ro[inc.face] + r, co[i] + k)] += &s * &f[(r, k)];
                        }
                    }
                }
            }
        }
        m
    }

    /// The correction D_{2,0} → D_{0,1}: for a 2-cell, the twice-applied
    /// horizontal map lands in ⊕ ℤΓ ⊗_{Γ_v} I(Γ_v); lifting it through the
    /// first boundary of each vertex resolution gives the term.
    fn correction(&self) -> Result<IntMatrix> {
        let cx = self.complex;
        let ro = self.offsets(0, 1);
        let mut m = IntMatrix::zeros(self.dim(0, 1), cx.cells[2].len());
        for (s, face) in cx.cells[2].iter().enumerate() {
            // terms (vertex, sign, element)
            let mut terms: Vec<(usize, i32, GroupElement)> = Vec::new();
            for inc in &face.boundary {
                for inc2 in &cx.cells[1][inc.face].boundary {
                    terms.push((inc2.face, inc.sign * inc2.sign, inc.element.mul(&inc2.element)));
                }
            }
            let mut by_vertex: BTreeMap<usize, Vec<(GroupElement, Vec<BigInt>)>> = BTreeMap::new();
            for (v, sign, x) in terms {
                let stab = &cx.cells[0][v].stabiliser;
                let id = &self.ident[0][v];
                let cosets = by_vertex.entry(v).or_default();
                let n = stab.order();
                let found = cosets.iter().position(|(g0, _)| stab.contains(&g0.inverse().mul(&x)));
                let k = match found {
                    Some(k) => k,
                    None => {
                        cosets.push((x.clone(), vec![BigInt::zero(); n]));
                        cosets.len() - 1
                    }
                };
                let h = cosets[k].0.inverse().mul(&x);
                let idx = id.index_of(stab, &h).ok_or(Error::NotASubgroup)?;
                cosets[k].1[idx] += sign;
            }
            for (v, cosets) in by_vertex {
                let r = self.resolution(0, v);
                for (_, c) in cosets {
                    if c.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if r.ranks[1] == 0 {
                        return Err(Error::Internal("boundary of a 2-cell does not close up".into()));
                    }
                    let y = r.lift(1, &c)?;
                    for (j, val) in coinvariant(r.order(), &y).into_iter().enumerate() {
                        m[(ro[v] + j, s)] -= val;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Whether the total complex is available (all vertex stabilisers finite).
    pub fn has_total_complex(&self) -> bool {
        self.d2.is_some()
    }

    /// dim of the n-th total chain group ⊕_{p+q=n} D_{p,q}.
    pub fn total_dim(&self, n: usize) -> usize {
        (0..3).filter(|&p| p <= n).map(|p| self.dim(p, n - p)).sum()
    }

    /// Total differential T_n → T_{n−1}; columns ordered by p.
    pub fn total_boundary(&self, n: usize) -> Result<IntMatrix> {
        let d2 = self.d2.as_ref().ok_or_else(|| Error::Internal("total complex needs finite vertex stabilisers".into()))?;
        let rows_dim = if n == 0 { 0 } else { self.total_dim(n - 1) };
        let mut m = IntMatrix::zeros(rows_dim, self.total_dim(n));
        if n == 0 {
            return Ok(m);
        }
        let col_off = |p: usize| (0..p).filter(|&k| k <= n).map(|k| self.dim(k, n - k)).sum::<usize>();
        let row_off = |p: usize| (0..p).filter(|&k| k < n).map(|k| self.dim(k, n - 1 - k)).sum::<usize>();
        let mut put = |r0: usize, c0: usize, b: &IntMatrix| {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if !b[(i, j)].is_zero() {
                        m[(r0 + i, c0 + j)] += &b[(i, j)];
                    }
                }
            }
        };
        for p in 0..3.min(n + 1) {
            let q = n - p;
            if q >= 1 {
                put(row_off(p), col_off(p), &self.vertical(p, q));
            }
            if p >= 1 {
                put(row_off(p - 1), col_off(p), &self.horizontal(p, q));
            }
        }
        if n == 2 {
            put(row_off(0), col_off(2), d2);
        }
        Ok(m)
    }

    /// H_n(Γ; ℤ) from the total complex (n < len).
    pub fn total_homology(&self, n: usize) -> Result<AbelianGroup> {
        let dims: Vec<usize> = (0..=n + 1).map(|k| self.total_dim(k)).collect();
        let d: Vec<IntMatrix> = (0..=n + 1).map(|k| self.total_boundary(k)).collect::<Result<_>>()?;
        Ok(chain_homology(&dims, &d, n))
    }

    /// dim H_n(Γ; 𝔽_p) from the total complex (n < len).
    pub fn total_homology_fp(&self, n: usize, p: u64) -> Result<usize> {
        let rk = |k: usize| -> Result<usize> {
            if k == 0 {
                return Ok(0);
            }
            Ok(FpMatrix::from_int(&self.total_boundary(k)?, p).rank())
        };
        Ok(self.total_dim(n) - rk(n)? - rk(n + 1)?)
    }

    /// E¹_{p,q} = ⊕_σ H_q(Γ_σ).
    pub fn e1_entry(&self, p: usize, q: usize) -> AbelianGroup {
        let mut g = AbelianGroup::trivial();
        for i in 0..self.complex.cells[p].len() {
            g = g.direct_sum(&self.resolution(p, i).homology(q));
        }
        g
    }

    pub fn e1(&self, q_max: usize) -> BigradedPage {
        BigradedPage { q_max, entries: (0..3).map(|p| (0..=q_max).map(|q| self.e1_entry(p, q)).collect()).collect() }
    }

    /// Cycles for d¹ at (p, q): x with d_v x = 0 and d_h x ∈ im d_v.
    fn e2_cycles(&self, p: usize, q: usize) -> IntMatrix {
        let dx = self.dim(p, q);
        let dv = self.vertical(p, q);
        if p == 0 {
            return kernel(&dv);
        }
        let dh = self.horizontal(p, q);
        let dv_up = self.vertical(p - 1, q + 1);
        let dy = dv_up.cols();
        // [[dv, 0], [dh, −dv']] acting on (x, y)
        let top = dv.hcat(&IntMatrix::zeros(dv.rows(), dy));
        let bottom = dh.hcat(&dv_up.scaled(&-BigInt::one()));
        let k = kernel(&top.vcat(&bottom));
        let idx: Vec<usize> = (0..dx).collect();
        image_basis(&k.select_rows(&idx))
    }

    /// Boundaries for d¹ at (p, q): im d_v + d_h(ker d_v on D_{p+1,q}).
    fn e2_boundaries(&self, p: usize, q: usize) -> IntMatrix {
        let a = self.vertical(p, q + 1);
        let kv = kernel(&self.vertical(p + 1, q));
        let b = self.horizontal(p + 1, q).mul(&kv);
        a.hcat(&b)
    }

    /// E²_{p,q} for q < len.
    pub fn e2_entry(&self, p: usize, q: usize) -> Result<AbelianGroup> {
        AbelianGroup::subquotient(&self.e2_cycles(p, q), &self.e2_boundaries(p, q))
    }

    pub fn e2(&self, q_max: usize) -> Result<BigradedPage> {
        let entries = (0..3).map(|p| (0..=q_max).map(|q| self.e2_entry(p, q)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(BigradedPage { q_max, entries })
    }

    /// dim E²_{p,q} of the double complex reduced mod ℓ.
    pub fn e2_dim_fp(&self, p: usize, q: usize, l: u64) -> usize {
        let dv = FpMatrix::from_int(&self.vertical(p, q), l);
        let z = if p == 0 {
            dv.cols() - dv.rank()
        } else {
            let dv_up = self.vertical(p - 1, q + 1);
            let top = self.vertical(p, q).hcat(&IntMatrix::zeros(dv.rows(), dv_up.cols()));
            let bottom = self.horizontal(p, q).hcat(&dv_up.scaled(&-BigInt::one()));
            let k = FpMatrix::from_int(&top.vcat(&bottom), l).kernel();
            // project the kernel onto the x-coordinates
            let dx = self.dim(p, q);
            let mut proj = FpMatrix::zeros(l, dx, k.cols());
            for i in 0..dx {
                for j in 0..k.cols() {
                    proj.set(i, j, k.get(i, j));
                }
            }
            proj.rank()
        };
        let kv = FpMatrix::from_int(&self.vertical(p + 1, q), l).kernel();
        let hb = FpMatrix::from_int(&self.horizontal(p + 1, q), l).mul(&kv);
        let b = FpMatrix::from_int(&self.vertical(p, q + 1), l).hcat(&hb);
        z - b.rank()
    }

    /// E^∞_{p,n−p} for p = 0, 1, 2 from the column filtration of the total complex.
    pub fn e_infinity(&self, n: usize) -> Result<Vec<AbelianGroup>> {
        let d = self.total_boundary(n)?;
        let up = self.total_boundary(n + 1)?;
        // columns of T_n belonging to p ≤ k
        let mut out = Vec::new();
        let mut prev: Option<IntMatrix> = None;
        let width = |k: usize| (0..=k.min(n)).map(|j| self.dim(j, n - j)).sum::<usize>();
        for k in 0..3usize {
            let w = if k > n { width(n) } else { width(k) };
            let idx: Vec<usize> = (0..w).collect();
            let ker = kernel(&d.select_columns(&idx));
            // embed into T_n
            let mut z = IntMatrix::zeros(d.cols(), ker.cols());
            for i in 0..ker.rows() {
                for j in 0..ker.cols() {
                    z[(i, j)] = ker[(i, j)].clone();
                }
            }
            let filt = image_basis(&z.hcat(&up));
            let lower = match &prev {
                None => image_basis(&up),
                Some(l) => l.clone(),
            };
            out.push(AbelianGroup::subquotient(&filt, &lower)?);
            prev = Some(filt);
        }
        Ok(out)
    }

    /// Check d_v² = 0, d_v d_h + d_h d_v = 0 and d_h² + d_v d₂ = 0 on all blocks.
    pub fn check(&self) -> Result<()> {
        for p in 0..3 {
            for q in 0..self.len {
                if q >= 2 && !self.vertical(p, q - 1).mul(&self.vertical(p, q)).is_zero() {
                    return Err(Error::BoundaryCheckFailed(p + q));
                }
                if p >= 1 && q >= 1 {
                    let a = self.vertical(p - 1, q).mul(&self.horizontal(p, q));
                    let b = self.horizontal(p, q - 1).mul(&self.vertical(p, q));
                    if !a.add(&b).is_zero() {
                        return Err(Error::BoundaryCheckFailed(p + q));
                    }
                }
            }
        }
        if let Some(d2) = &self.d2 {
            let hh = self.horizontal(1, 0).mul(&self.horizontal(2, 0));
            if !hh.add(&self.vertical(0, 1).mul(d2)).is_zero() {
                return Err(Error::BoundaryCheckFailed(2));
            }
        }
        Ok(())
    }

    /// d¹ ∘ d¹ = 0 on E¹: the composite of the two horizontal maps sends
    /// vertical cycles in column 2 to vertical boundaries in column 0.
    pub fn check_first_differential(&self) -> Result<()> {
        for q in 0..self.len.saturating_sub(1) {
            let z = kernel(&self.vertical(2, q));
            let w = self.horizontal(1, q).mul(&self.horizontal(2, q)).mul(&z);
            let b = self.vertical(0, q + 1);
            if (0..w.cols()).any(|j| solve(&b, &w.column(j)).is_none()) {
                return Err(Error::BoundaryCheckFailed(q + 2));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(m: u64) -> OrbitComplex {
        crate::pipeline::compute_complex(m, 4000).unwrap()
    }

    #[test]
    fn gaussian_integers_low_degrees() {
        let c = complex(1);
        let dc = DoubleComplex::new(&c, 6).unwrap();
        dc.check().unwrap();
        dc.check_first_differential().unwrap();
        assert!(dc.has_total_complex());
        assert_eq!(dc.total_homology(1).unwrap().to_string(), "(Z/2)^2");
        assert_eq!(dc.total_homology(2).unwrap().to_string(), "Z/2 + Z/6");
        for q in 3..5 {
            for l in [2, 3] {
                let direct = dc.e2_dim_fp(0, q, l) + dc.e2_dim_fp(1, q - 1, l);
                assert_eq!(dc.total_homology_fp(q, l).unwrap(), direct, "q = {q}, l = {l}");
            }
        }
    }

    #[test]
    fn second_page_rows_are_torsion() {
        let c = complex(2);
        let dc = DoubleComplex::new(&c, 5).unwrap();
        let e2 = dc.e2(4).unwrap();
        for p in 0..3 {
            for q in 1..=4 {
                let g = e2.get(p, q);
                assert_eq!(g.rank, 0);
                assert!(g.torsion.iter().all(|&t| 6 % t == 0 || t == 4), "E2({p},{q}) = {g}");
                if p == 2 {
                    assert!(g.is_trivial());
                }
            }
        }
        assert_eq!(e2.get(0, 0).to_string(), "Z");
    }
}

