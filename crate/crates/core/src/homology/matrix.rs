//! Dense integer matrices with Hermite- and Smith-style reductions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = &o[(k, j)];
                    if !y.is_zero() {
                        out[(i, j)] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// Horizontal concatenation [self | o].
    pub fn hcat(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                m[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vcat(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        IntMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m[(ii, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = q * s;
                self.data[i * self.cols + dst] -= v;
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = q * s;
                self.data[dst * self.cols + j] -= v;
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

/// Column echelon form H = A·U with U unimodular.
///
/// The first `pivots.len()` columns of H are nonzero with pivot (leading)
/// rows `pivots`, strictly increasing; remaining columns are zero, so the
/// matching columns of U span the integer kernel of A.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer quotient keeps remainders small; r has the sign of b
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

pub fn column_echelon(a: &IntMatrix, track: bool) -> ColumnEchelon {
    let mut h = a.clone();
    let n = a.cols;
    let mut u = if track { IntMatrix::identity(n) } else { IntMatrix::zeros(0, n) };
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..a.rows {
        if k == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in k..n {
                let x = &h[(i, j)];
                if !x.is_zero() && best.is_none_or(|b| x.abs() < h[(i, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            if track {
                u.swap_cols(k, b);
            }
            let piv = h[(i, k)].clone();
            let mut done = true;
            for j in k + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = round_div(&h[(i, j)], &piv);
                h.col_axpy(j, k, &q);
                if track {
                    u.col_axpy(j, k, &q);
                }
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[(i, k)].is_zero() {
            if h[(i, k)].is_negative() {
                h.negate_col(k);
                if track {
                    u.negate_col(k);
                }
            }
            // reduce earlier columns modulo the new pivot
            let piv = h[(i, k)].clone();
            for j in 0..k {
                let q = h[(i, j)].div_floor(&piv);
                if !q.is_zero() {
                    h.col_axpy(j, k, &q);
                    if track {
                        u.col_axpy(j, k, &q);
                    }
                }
            }
            pivots.push(i);
            k += 1;
        }
    }
    ColumnEchelon { h, u, pivots }
}

pub fn rank(a: &IntMatrix) -> usize {
    column_echelon(a, false).pivots.len()
}

/// Basis (as columns) of the integer kernel of A.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let ce = column_echelon(a, true);
    let r = ce.pivots.len();
    let idx: Vec<usize> = (r..a.cols).collect();
    let k = ce.u.select_columns(&idx);
    reduce_basis(&k)
}

/// Basis (as columns) of the lattice spanned by the columns of A.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let ce = column_echelon(a, false);
    let idx: Vec<usize> = (0..ce.pivots.len()).collect();
    ce.h.select_columns(&idx)
}

/// Replace a basis of a lattice by its column Hermite basis, which keeps
/// entries small for the sparse matrices met here.
pub fn reduce_basis(b: &IntMatrix) -> IntMatrix {
    if b.cols == 0 {
        return b.clone();
    }
    image_basis(b)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Shorten a lattice basis by repeated pairwise size reduction: replace bᵢ by
/// bᵢ − q·bⱼ while that decreases its length. The result spans the same lattice.
pub fn pairwise_reduce(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut norms: Vec<BigInt> = basis.iter().map(|b| dot(b, b)).collect();
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j || norms[j].is_zero() {
                    continue;
                }
                let q = round_div(&dot(&basis[i], &basis[j]), &norms[j]);
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[i].iter().zip(&basis[j]).map(|(x, y)| x - &q * y).collect();
                let nn = dot(&cand, &cand);
                if nn < norms[i] {
                    basis[i] = cand;
                    norms[i] = nn;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| norms[a].cmp(&norms[b]));
    idx.into_iter().map(|i| basis[i].clone()).collect()
}

/// Some integer solution of A·x = b, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ce = column_echelon(a, true);
    solve_with(&ce, b)
}

pub fn solve_with(ce: &ColumnEchelon, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = ce.pivots.len();
    let mut y = vec![BigInt::zero(); ce.h.cols];
    let mut resid: Vec<BigInt> = b.to_vec();
    for (j, &p) in ce.pivots.iter().enumerate() {
        let piv = &ce.h[(p, j)];
        let (q, rem) = resid[p].div_mod_floor(piv);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in 0..ce.h.rows {
                let x = &ce.h[(i, j)];
                if !x.is_zero() {
                    resid[i] -= x * &q;
                }
            }
        }
        y[j] = q;
    }
    if resid.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let _ = r;
    Some(ce.u.mul_vec(&y))
}

/// Smith normal form D = U·A·V with U, V unimodular and the nonzero
/// diagonal entries d₁ | d₂ | … positive.
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block, deterministic order
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let piv = d[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = round_div(&d[(i, t)], &piv);
                    d.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = round_div(&d[(t, j)], &piv);
                    d.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the new smallest entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..m {
                    if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                }
                if best.1 != t {
                    d.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // divisibility: pivot must divide the rest of the block
            let mut offender = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&piv) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // row t += row i, then keep reducing
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, i, &minus_one);
                    u.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, d, v }
}

/// Determinant of a square matrix by fraction-free elimination (Bareiss).
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn is_diagonal_chain(d: &IntMatrix) -> bool {
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j && !d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
        let nz: Vec<&BigInt> = diag.iter().take_while(|x| !x.is_zero()).collect();
        if diag.iter().skip(nz.len()).any(|x| !x.is_zero()) {
            return false;
        }
        nz.iter().all(|x| x.is_positive()) && nz.windows(2).all(|w| w[1].is_multiple_of(w[0]))
    }

    #[test]
    fn smith_small_examples() {
        let s = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        let s = smith_normal_form(&mat(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let s = smith_normal_form(&IntMatrix::zeros(3, 2));
        assert!(s.d.is_zero());
        assert!(s.diagonal().is_empty());
    }

    #[test]
    fn kernel_and_solve() {
        let a = mat(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        // saturated: the kernel vector is primitive
        let g = k.column(0).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        assert!(g.is_one());
        let b = vec![BigInt::from(6), BigInt::from(15)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(solve(&mat(&[vec![2, 4]]), &[BigInt::from(3)]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=30, 1usize..=30).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop_oneof![6 => Just(0i64), 3 => -3i64..=3, 1 => -40i64..=40], r * c)
                .prop_map(move |v| {
                    let rows: Vec<Vec<i64>> = v.chunks(c).map(|x| x.to_vec()).collect();
                    IntMatrix::from_rows(&rows)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn smith_is_a_unimodular_diagonalisation(a in arb_matrix()) {
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert!(is_diagonal_chain(&s.d));
            prop_assert!(determinant(&s.u).abs().is_one());
            prop_assert!(determinant(&s.v).abs().is_one());
            if a.rows() == a.cols() {
                let prod = (0..a.rows()).fold(BigInt::one(), |p, i| p * &s.d[(i, i)]);
                prop_assert_eq!(determinant(&a).abs(), prod);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn kernel_is_exact(a in arb_matrix()) {
            let k = kernel(&a);
            prop_assert!(a.mul(&k).is_zero());
            prop_assert_eq!(k.cols() + rank(&a), a.cols());
        }
    }
}
