//! Free ℤG-resolutions of ℤ for the stabiliser models, chain maps over
//! group homomorphisms, and coinvariants.
//!
//! An element of the free module P_q = (ℤG)^r is a coefficient vector indexed
//! by (generator i, group element g) ↦ i·|G| + g, standing for Σ c·g·eᵢ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::GroupModel;
use super::fp::FpSpan;
use super::matrix::{column_echelon, kernel, pairwise_reduce, solve_with, ColumnEchelon, IntMatrix};
use super::{chain_homology, AbelianGroup};
use crate::complex::IsoType;
use crate::error::{Error, Result};

pub type Vector = Vec<BigInt>;

/// h·v for v in a free module of the given rank.
pub fn act(g: &GroupModel, h: usize, v: &[BigInt]) -> Vector {
    let n = g.order();
    let mut out = vec![BigInt::zero(); v.len()];
    for (idx, c) in v.iter().enumerate() {
        if !c.is_zero() {
            let (i, x) = (idx / n, idx % n);
            out[i * n + g.mul(h, x)] = c.clone();
        }
    }
    out
}

fn add_into(acc: &mut [BigInt], v: &[BigInt], k: &BigInt) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += k * b;
        }
    }
}

/// Integer matrix of the ℤG-map sending eᵢ to imgs[i]; columns (i, g).
fn z_matrix(g: &GroupModel, rows: usize, imgs: &[Vector]) -> IntMatrix {
    let n = g.order();
    let mut m = IntMatrix::zeros(rows, imgs.len() * n);
    for (i, v) in imgs.iter().enumerate() {
        for h in 0..n {
            for (r, c) in act(g, h, v).into_iter().enumerate() {
                if !c.is_zero() {
                    m[(r, i * n + h)] = c;
                }
            }
        }
    }
    m
}

/// Sum the coefficients of each generator: the map to ℤ^r = P ⊗_G ℤ.
pub fn coinvariant(n: usize, v: &[BigInt]) -> Vector {
    v.chunks(n).map(|c| c.iter().sum()).collect()
}

/// A free resolution P_q → … → P_0 = ℤG → ℤ.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub group: GroupModel,
    pub ranks: Vec<usize>,
    /// `d[q][i]` = ∂e_i ∈ P_{q−1} for q ≥ 1; `d[0]` is empty.
    d: Vec<Vec<Vector>>,
    /// Echelon forms of the integer matrices of ∂_q, for solving.
    ech: Vec<Option<ColumnEchelon>>,
}

const BIG_PRIME: u64 = 2_147_483_647;

fn residues(v: &[BigInt], p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    v.iter().map(|x| x.mod_floor(&bp).to_u64().unwrap()).collect()
}

fn prime_factors(mut d: BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p * p) <= d {
        if (&d % p).is_zero() {
            out.push(p);
            while (&d % p).is_zero() {
                d /= p;
            }
        }
        p += 1;
    }
    if d > BigInt::one() {
        out.push(d.to_u64().expect("index factor too large"));
    }
    out
}

/// Few generators of the ℤG-lattice with ℤ-basis the columns of `basis`.
///
/// Works in coordinates with respect to the basis. Each step takes the basis
/// vector whose orbit enlarges the span most: first over ℚ (modulo a large
/// prime), then modulo the primes dividing the index of the span. Redundant
/// generators are dropped at the end.
fn module_generators(g: &GroupModel, basis: &IntMatrix) -> Vec<Vector> {
    let k = basis.cols();
    if k == 0 {
        return Vec::new();
    }
    let n = g.order();
    let ech = column_echelon(basis, true);
    // orbit[h][i] = coordinates of h·b_i
    let cols = basis.columns();
    let orbit: Vec<Vec<Vector>> = (0..n)
        .map(|h| {
            cols.iter()
                .map(|b| {
                    let v: Vector = act(g, h, b);
                    solve_with(&ech, &v).expect("lattice is G-stable")
                })
                .collect()
        })
        .collect();
    let orbit_of = |i: usize| -> Vec<Vector> { (0..n).map(|h| orbit[h][i].clone()).collect() };
    let full_index = |chosen: &[usize]| -> BigInt {
        let vs: Vec<Vector> = chosen.iter().flat_map(|&i| orbit_of(i)).collect();
        let ce = column_echelon(&IntMatrix::from_columns(k, &vs), false);
        if ce.pivots.len() < k {
            return BigInt::zero();
        }
        ce.pivots.iter().enumerate().map(|(j, &r)| ce.h[(r, j)].abs()).product()
    };
    let mut primes = vec![BIG_PRIME, 2, 3];
    let mut chosen: Vec<usize> = Vec::new();
    let spans_of = |chosen: &[usize], primes: &[u64]| -> Vec<FpSpan> {
        primes
            .iter()
            .map(|&p| {
                let mut s = FpSpan::new(p);
                for &i in chosen {
                    for v in orbit_of(i) {
                        s.insert(residues(&v, p));
                    }
                }
                s
            })
            .collect()
    };
    let mut spans = spans_of(&chosen, &primes);
    loop {
        if spans.iter().all(|s| s.dim() == k) {
            let d = full_index(&chosen);
            if d.is_one() {
                break;
            }
            let mut added = false;
            for p in prime_factors(d) {
                if !primes.contains(&p) {
                    primes.push(p);
                    added = true;
                }
            }
            assert!(added, "index not detected modulo its prime factors");
            spans = spans_of(&chosen, &primes);
            continue;
        }
        let mut best: Option<(Vec<usize>, usize)> = None;
        for i in 0..k {
            if chosen.contains(&i) {
                continue;
            }
            let orb = orbit_of(i);
            let score: Vec<usize> = std::iter::once(spans[0].gain(&orb.iter().map(|v| residues(v, primes[0])).collect::<Vec<_>>()))
                .chain(std::iter::once(
                    spans[1..].iter().zip(&primes[1..]).map(|(s, &p)| s.gain(&orb.iter().map(|v| residues(v, p)).collect::<Vec<_>>())).sum(),
                ))
                .collect();
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, i));
            }
        }
        let (score, i) = best.expect("span is incomplete but no candidate is left");
        assert!(score.iter().any(|&x| x > 0), "no candidate enlarges the span");
        chosen.push(i);
        for (s, &p) in spans.iter_mut().zip(&primes) {
            for v in orbit_of(i) {
                s.insert(residues(&v, p));
            }
        }
    }
    // drop generators that the others already produce
    let mut j = 0;
    while j < chosen.len() && chosen.len() > 1 {
        let rest: Vec<usize> = chosen.iter().enumerate().filter(|(a, _)| *a != j).map(|(_, &x)| x).collect();
        if full_index(&rest).is_one() {
            chosen = rest;
        } else {
            j += 1;
        }
    }
    chosen.iter().map(|&i| cols[i].clone()).collect()
}

impl Resolution {
    /// Resolution of length `len` (modules P_0 … P_len).
    pub fn new(group: GroupModel, len: usize) -> Self {
        let n = group.order();
        let mut ranks = vec![1];
        let mut d: Vec<Vec<Vector>> = vec![Vec::new()];
        // the augmentation as a 1 × n matrix
        let mut prev = IntMatrix::from_rows(&[vec![1i64; n]]);
        let mut ech = vec![None];
        for _q in 1..=len {
            let k = kernel(&prev);
            let k = IntMatrix::from_columns(k.rows(), &pairwise_reduce(k.columns()));
            let gens = module_generators(&group, &k);
            let span = (!gens.is_empty()).then(|| column_echelon(&z_matrix(&group, prev.cols(), &gens), true));
            let m = z_matrix(&group, prev.cols(), &gens);
            ranks.push(gens.len());
            d.push(gens);
            ech.push(span);
            prev = m;
        }
        Resolution { group, ranks, d, ech }
    }

    pub fn for_type(t: IsoType, len: usize) -> Self {
        Self::new(GroupModel::new(t), len)
    }

    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn boundary_of(&self, q: usize, i: usize) -> &Vector {
        &self.d[q][i]
    }

    /// ∂ applied to an arbitrary element of P_q.
    pub fn boundary(&self, q: usize, x: &[BigInt]) -> Vector {
        let n = self.order();
        let mut out = vec![BigInt::zero(); self.ranks[q - 1] * n];
        for (idx, c) in x.iter().enumerate() {
            if !c.is_zero() {
                add_into(&mut out, &act(&self.group, idx % n, &self.d[q][idx / n]), c);
            }
        }
        out
    }

    /// Some y ∈ P_q with ∂y = x; x must be a cycle (for q = 1: of augmentation 0).
    pub fn lift(&self, q: usize, x: &[BigInt]) -> Result<Vector> {
        let e = self.ech[q].as_ref();
        match e {
            None if x.iter().all(|c| c.is_zero()) => Ok(Vec::new()),
            None => Err(Error::Internal("lift through a zero module".into())),
            Some(e) => solve_with(e, x).ok_or_else(|| Error::Internal(format!("not a boundary in degree {}", q - 1))),
        }
    }

    /// ∂_q ⊗_G ℤ as an r_{q−1} × r_q matrix.
    pub fn coinvariant_boundary(&self, q: usize) -> IntMatrix {
        let n = self.order();
        let cols: Vec<Vector> = self.d[q].iter().map(|v| coinvariant(n, v)).collect();
        IntMatrix::from_columns(self.ranks[q - 1], &cols)
    }

    /// H_q(G; ℤ) for q < len.
    pub fn homology(&self, q: usize) -> AbelianGroup {
        let dims: Vec<usize> = self.ranks.clone();
        let d: Vec<IntMatrix> =
            (0..=self.len()).map(|k| if k == 0 { IntMatrix::zeros(0, 1) } else { self.coinvariant_boundary(k) }).collect();
        chain_homology(&dims, &d, q)
    }

    /// dim H_q(G; 𝔽_p) for q < len.
    pub fn homology_fp(&self, q: usize, p: u64) -> usize {
        let rk = |k: usize| {
            if k == 0 || k > self.len() {
                0
            } else {
                super::fp::FpMatrix::from_int(&self.coinvariant_boundary(k), p).rank()
            }
        };
        self.ranks[q] - rk(q) - rk(q + 1)
    }
}

/// A chain map between resolutions over a homomorphism φ of the groups.
#[derive(Clone, Debug)]
pub struct ChainMap {
    /// `f[q][i]` = f(eᵢ) in the target's P_q.
    f: Vec<Vec<Vector>>,
    phi: Vec<usize>,
    target: GroupModel,
    source_order: usize,
}

impl ChainMap {
    /// Lift φ (given on model indices) to a chain map with f₀(1) = 1.
    pub fn new(src: &Resolution, dst: &Resolution, phi: &[usize], len: usize) -> Result<Self> {
        let mut unit = vec![BigInt::zero(); dst.order()];
        unit[0] = BigInt::one();
        let mut cm = ChainMap { f: vec![vec![unit]], phi: phi.to_vec(), target: dst.group.clone(), source_order: src.order() };
        for q in 1..=len {
            let mut row = Vec::new();
            for i in 0..src.ranks[q] {
                let rhs = cm.apply(q - 1, src.boundary_of(q, i), dst.ranks[q - 1]);
                row.push(dst.lift(q, &rhs)?);
            }
            cm.f.push(row);
        }
        Ok(cm)
    }

    /// f applied to an element of the source's P_q.
    pub fn apply(&self, q: usize, x: &[BigInt], target_rank: usize) -> Vector {
        let n = self.source_order;
        let mut out = vec![BigInt::zero(); target_rank * self.target.order()];
        for (idx, c) in x.iter().enumerate() {
            if !c.is_zero() {
                let img = &self.f[q][idx / n];
                if !img.is_empty() {
                    add_into(&mut out, &act(&self.target, self.phi[idx % n], img), c);
                }
            }
        }
        out
    }

    /// f_q ⊗ ℤ on coinvariants (rows: target generators).
    pub fn coinvariant(&self, q: usize, target_rank: usize) -> IntMatrix {
        let n = self.target.order();
        let cols: Vec<Vector> =
            self.f[q].iter().map(|v| if v.is_empty() { vec![BigInt::zero(); target_rank] } else { coinvariant(n, v) }).collect();
        IntMatrix::from_columns(target_rank, &cols)
    }
}
