//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matrix::{smith_normal_form, solve_with, column_echelon, IntMatrix};
use crate::error::{Error, Result};

/// ℤ^rank ⊕ ⊕ ℤ/dᵢ with d₁ | d₂ | … and every dᵢ > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => AbelianGroup { rank: 0, torsion: vec![n] },
        }
    }

    /// Group given by an arbitrary list of cyclic orders (0 meaning ℤ),
    /// brought into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let n = orders.len();
        let mut a = IntMatrix::zeros(n, n);
        for (i, &o) in orders.iter().enumerate() {
            a[(i, i)] = BigInt::from(o);
        }
        Self::cokernel(&a)
    }

    /// Cokernel of the column relations `rel` (rows = generators).
    pub fn cokernel(rel: &IntMatrix) -> Self {
        let s = smith_normal_form(rel);
        let diag = s.diagonal();
        let torsion: Vec<u64> = diag.iter().filter(|d| !d.is_one()).map(|d| d.to_u64().expect("torsion too large")).collect();
        AbelianGroup { rank: rel.rows() - diag.len(), torsion }
    }

    /// Z/B where the columns of `z` are a basis of a free lattice and the
    /// columns of `b` lie in it.
    pub fn subquotient(z: &IntMatrix, b: &IntMatrix) -> Result<Self> {
        if z.cols() == 0 {
            return Ok(Self::trivial());
        }
        let ce = column_echelon(z, true);
        if ce.pivots.len() != z.cols() {
            return Err(Error::Internal("subquotient: basis not independent".into()));
        }
        let mut coords = IntMatrix::zeros(z.cols(), b.cols());
        for j in 0..b.cols() {
            let x = solve_with(&ce, &b.column(j)).ok_or_else(|| Error::Internal("subquotient: B not inside Z".into()))?;
            for (i, v) in x.into_iter().enumerate() {
                coords[(i, j)] = v;
            }
        }
        Ok(Self::cokernel(&coords))
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, o: &AbelianGroup) -> AbelianGroup {
        let mut orders: Vec<u64> = self.torsion.iter().chain(&o.torsion).copied().collect();
        orders.extend(std::iter::repeat_n(0, self.rank + o.rank));
        Self::from_cyclic_orders(&orders)
    }

    /// Elementary divisors ℓ^e of the ℓ-primary part, largest first.
    pub fn primary_exponents(&self, l: u64) -> Vec<u32> {
        let mut e: Vec<u32> = self
            .torsion
            .iter()
            .map(|&d| {
                let mut k = 0;
                let mut d = d;
                while d % l == 0 {
                    d /= l;
                    k += 1;
                }
                k
            })
            .filter(|&k| k > 0)
            .collect();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }

    pub fn primary_part(&self, l: u64) -> AbelianGroup {
        let orders: Vec<u64> = self.primary_exponents(l).iter().map(|&k| l.pow(k)).collect();
        Self::from_cyclic_orders(&orders)
    }

    /// Number of cyclic ℓ-primary summands, i.e. dim (A ⊗ F_ℓ) minus the rank.
    pub fn l_rank(&self, l: u64) -> usize {
        self.primary_exponents(l).len()
    }

    /// Finite with order a power of ℓ.
    pub fn is_l_torsion_only(&self, l: u64) -> bool {
        self.rank == 0 && self.torsion.iter().all(|&d| {
            let mut d = d;
            while d % l == 0 {
                d /= l;
            }
            d == 1
        })
    }

    /// dim over F_ℓ of A ⊗ F_ℓ.
    pub fn dim_tensor_fl(&self, l: u64) -> usize {
        self.rank + self.l_rank(l)
    }

    /// dim over F_ℓ of Tor(A, F_ℓ).
    pub fn dim_tor_fl(&self, l: u64) -> usize {
        self.l_rank(l)
    }

    /// Parse the textual form produced by `Display`, e.g. `Z^3 + Z/2 + Z/6`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut orders = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let bad = || Error::Internal(format!("cannot parse abelian group `{s}`"));
            let (body, exp) = match part.strip_prefix('(').and_then(|r| r.split_once(")^")) {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if let Some(n) = body.strip_prefix("Z/") {
                let n: u64 = n.parse().map_err(|_| bad())?;
                orders.extend(std::iter::repeat_n(n, exp));
            } else if part == "Z" {
                orders.push(0);
            } else if let Some(e) = part.strip_prefix("Z^") {
                let k: usize = e.parse().map_err(|_| bad())?;
                orders.extend(std::iter::repeat_n(0, k));
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(&orders))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let k = self.torsion[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
            i += k;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology of a chain complex of free abelian groups. `d[n]` maps C_n to
/// C_{n-1} (rows = dim C_{n-1}); `dims[n]` = dim C_n.
pub fn chain_homology(dims: &[usize], d: &[IntMatrix], n: usize) -> AbelianGroup {
    let rank_of = |k: usize| -> (usize, Vec<BigInt>) {
        if k == 0 || k >= dims.len() || d[k].rows() == 0 || d[k].cols() == 0 {
            return (0, Vec::new());
        }
        let s = smith_normal_form(&d[k]);
        let diag = s.diagonal();
        (diag.len(), diag)
    };
    let (r_out, _) = rank_of(n);
    let (r_in, diag_in) = rank_of(n + 1);
    let torsion: Vec<u64> = diag_in.iter().filter(|x| !x.is_one()).map(|x| x.to_u64().unwrap()).collect();
    AbelianGroup { rank: dims[n] - r_out - r_in, torsion }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_and_display() {
        let g = AbelianGroup::from_cyclic_orders(&[2, 3, 0, 4, 0]);
        assert_eq!(g.rank, 2);
        assert_eq!(g.torsion, vec![2, 12]);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/12");
        assert_eq!(AbelianGroup::parse("Z^2 + Z/2 + Z/12").unwrap(), g);
        assert_eq!(AbelianGroup::parse("(Z/2)^3").unwrap().torsion, vec![2, 2, 2]);
        assert_eq!(g.primary_exponents(2), vec![2, 1]);
        assert_eq!(g.primary_part(3), AbelianGroup::cyclic(3));
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }

    #[test]
    fn circle_homology() {
        // two vertices, two edges both from v0 to v1
        let d1 = IntMatrix::from_rows(&[vec![-1i64, -1], vec![1, 1]]);
        let d = vec![IntMatrix::zeros(0, 2), d1];
        assert_eq!(chain_homology(&[2, 2], &d, 0), AbelianGroup::free(1));
        assert_eq!(chain_homology(&[2, 2], &d, 1), AbelianGroup::free(1));
    }

    #[test]
    fn projective_plane_torsion() {
        // minimal cell structure of RP²: d1 = 0, d2 = 2
        let d = vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1), IntMatrix::from_rows(&[vec![2i64]])];
        assert_eq!(chain_homology(&[1, 1, 1], &d, 1), AbelianGroup::cyclic(2));
        assert_eq!(chain_homology(&[1, 1, 1], &d, 2), AbelianGroup::trivial());
    }
}
