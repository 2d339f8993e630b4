//! Linear algebra over the prime field F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    debug_assert!(e.gcd == BigInt::from(1));
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_int(a: &IntMatrix, p: u64) -> Self {
        let bp = BigInt::from(p);
        let mut m = Self::zeros(p, a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.data[i * a.cols() + j] = a[(i, j)].mod_floor(&bp).to_u64().unwrap();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = (out.data[idx] + x * o.get(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn hcat(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.p, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    for j in 0..m.cols {
                        let v = (m.get(i, j) + (p - f) * m.get(r, j)) % p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space as columns.
    pub fn kernel(&self) -> FpMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.p, self.cols, free.len());
        for (kk, &f) in free.iter().enumerate() {
            k.set(f, kk, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if v != 0 {
                    k.set(pc, kk, self.p - v);
                }
            }
        }
        k
    }
}

/// A subspace of 𝔽_p^k kept in echelon form, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct FpSpan {
    p: u64,
    basis: Vec<(usize, Vec<u64>)>,
}

impl FpSpan {
    pub fn new(p: u64) -> Self {
        FpSpan { p, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (piv, b) in &self.basis {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        v
    }

    /// Add a vector; true if it was independent.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[piv], self.p);
        let v: Vec<u64> = v.into_iter().map(|x| x * inv % self.p).collect();
        // keep the basis fully reduced in the new pivot column
        for (_, b) in self.basis.iter_mut() {
            let c = b[piv];
            if c != 0 {
                for (x, y) in b.iter_mut().zip(&v) {
                    *x = (*x + (self.p - c) * y) % self.p;
                }
            }
        }
        self.basis.push((piv, v));
        true
    }

    /// Number of the given vectors that would extend the span.
    pub fn gain(&self, vs: &[Vec<u64>]) -> usize {
        let mut s = self.clone();
        vs.iter().filter(|v| s.insert((*v).clone())).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_depends_on_characteristic() {
        let a = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]);
        assert_eq!(FpMatrix::from_int(&a, 2).rank(), 1);
        assert_eq!(FpMatrix::from_int(&a, 3).rank(), 1);
        assert_eq!(FpMatrix::from_int(&a, 5).rank(), 2);
    }

    #[test]
    fn kernel_annihilates() {
        let a = IntMatrix::from_rows(&[vec![1i64, 1, 0, 2], vec![0, 1, 1, 1], vec![1, 2, 1, 3]]);
        for p in [2, 3, 7] {
            let m = FpMatrix::from_int(&a, p);
            let k = m.kernel();
            assert!(m.mul(&k).is_zero());
            assert_eq!(k.cols() + m.rank(), 4);
        }
    }
}
