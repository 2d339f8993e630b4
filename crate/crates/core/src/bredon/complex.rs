use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::characters::{induction_matrix, representation_ring, CharacterTable};
use crate::complex::{IsoType, OrbitComplex};
use crate::error::{Error, Result};
use crate::homology::group::{identify_cells, incidence_embedding};
use crate::homology::{chain_homology, AbelianGroup, IntMatrix};

/// Chains with basis (orbit cell, irreducible character of its stabiliser).
#[derive(Clone, Debug)]
pub struct BredonComplex {
    /// `basis[p]` lists (cell, character index).
    pub basis: Vec<Vec<(usize, usize)>>,
    /// `boundary[p]`: C_p → C_{p−1}; `boundary[0]` has no rows.
    pub boundary: Vec<IntMatrix>,
}

impl BredonComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn check(&self) -> Result<()> {
        for p in 2..self.boundary.len() {
            if !self.boundary[p - 1].mul(&self.boundary[p]).is_zero() {
                return Err(Error::BoundaryCheckFailed(p));
            }
        }
        Ok(())
    }
}

pub fn build_bredon_complex(complex: &OrbitComplex) -> Result<BredonComplex> {
    if complex.has_ideal_vertices() {
        return Err(Error::Internal("Bredon coefficients need finite vertex stabilisers".into()));
    }
    let tables: Vec<CharacterTable> = IsoType::ALL.iter().map(|&t| representation_ring(t)).collect::<Result<_>>()?;
    let table = |d: usize, i: usize| &tables[complex.cells[d][i].iso_type.index()];
    let ident = identify_cells(complex)?;
    let mut basis: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    for d in 0..3 {
        let mut b = Vec::new();
        let mut off = Vec::new();
        for i in 0..complex.cells[d].len() {
            off.push(b.len());
            b.extend((0..table(d, i).rank()).map(|k| (i, k)));
        }
        basis.push(b);
        offsets.push(off);
    }
    let mut boundary = vec![IntMatrix::zeros(0, basis[0].len())];
    for d in 1..3 {
        let mut m = IntMatrix::zeros(basis[d - 1].len(), basis[d].len());
        for (i, c) in complex.cells[d].iter().enumerate() {
            for inc in &c.boundary {
                let phi = incidence_embedding(complex, &ident, d, i, inc)?;
                let ind = induction_matrix(table(d, i), table(d - 1, inc.face), &phi)?;
                let s = BigInt::from(inc.sign);
                for r in 0..ind.rows() {
                    for k in 0..ind.cols() {
                        m[(offsets[d - 1][inc.face] + r, offsets[d][i] + k)] += &s * &ind[(r, k)];
                    }
                }
            }
        }
        boundary.push(m);
    }
    let b = BredonComplex { basis, boundary };
    b.check()?;
    Ok(b)
}

/// H₀ .. H₃ of the Bredon complex; the complex has no 3-cells, so H₃ is
/// computed from an empty chain group.
pub fn bredon_homology(b: &BredonComplex) -> Vec<AbelianGroup> {
    let mut dims = b.dims();
    let mut d = b.boundary.clone();
    dims.extend([0, 0]);
    d.push(IntMatrix::zeros(dims[2], 0));
    d.push(IntMatrix::zeros(0, 0));
    (0..4).map(|n| chain_homology(&dims, &d, n)).collect()
}

/// Equivariant K-homology of the proper Γ-space in degrees 0 and 1; all other
/// degrees follow by Bott periodicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KHomologyResult {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
    pub bredon: Vec<AbelianGroup>,
    /// Cases where the extension 0 → H₀ → K₀ → H₂ → 0 might not split.
    pub warnings: Vec<String>,
}

/// K₀ = H₀ ⊕ H₂ and K₁ = H₁, valid when H₃ vanishes.
pub fn k_homology_assembly(h: &[AbelianGroup]) -> Result<KHomologyResult> {
    if h.len() < 3 || h.get(3).is_some_and(|g| !g.is_trivial()) {
        return Err(Error::AssemblyAmbiguous);
    }
    let mut warnings = Vec::new();
    if !h[2].torsion.is_empty() && !h[0].is_trivial() {
        warnings.push(format!("H2 = {} has torsion; K0 is reported as the split extension of it by H0 = {}", h[2], h[0]));
    }
    Ok(KHomologyResult { k0: h[0].direct_sum(&h[2]), k1: h[1].clone(), bredon: h.to_vec(), warnings })
}
