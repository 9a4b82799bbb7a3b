use super::{ext_gcd, floor_div, Int};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
            cols,
        )
    }

    pub fn diag(entries: &[Int]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Int::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    /// Drops all-zero rows.
    pub fn without_zero_rows(&self) -> IntMatrix {
        let rows = (0..self.rows)
            .filter(|&i| !self.is_zero_row(i))
            .map(|i| self.row(i).to_vec())
            .collect();
        Self::from_rows(rows, self.cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = k * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = k * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replaces rows (a, b) by (s*a + t*b, u*a + v*b).
    fn combine_rows(&mut self, a: usize, b: usize, s: &Int, t: &Int, u: &Int, v: &Int) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = s * &x + t * &y;
            self[(b, j)] = u * &x + v * &y;
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·M`, `U`
/// unimodular, `H` upper echelon with positive pivots and entries above each
/// pivot in `[0, pivot)`. Zero rows come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for col in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        for i in r + 1..m.rows() {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(r, col)].clone();
            let b = h[(i, col)].clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let p = -(&b / &g);
            let q = &a / &g;
            h.combine_rows(r, i, &s, &t, &p, &q);
            u.combine_rows(r, i, &s, &t, &p, &q);
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, col)].clone();
        for i in 0..r {
            let q = floor_div(&h[(i, col)], &pivot);
            if !q.is_zero() {
                let k = -q;
                h.add_row(i, r, &k);
                u.add_row(i, r, &k);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(D, U, V)` with `D = U·M·V`, `U`, `V`
/// unimodular and `D` diagonal with `0 <= d_1 | d_2 | ...`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, u, v);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = floor_div(&d[(i, t)], &pivot);
                let k = -q;
                d.add_row(i, t, &k);
                u.add_row(i, t, &k);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = floor_div(&d[(t, j)], &pivot);
                let k = -q;
                d.add_col(j, t, &k);
                v.add_col(j, t, &k);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let one = Int::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// Solves `A·x = b` over the integers. Returns a particular solution and a
/// basis (rows, in Hermite normal form) of the integer kernel of `A`.
pub fn solve_diophantine(a: &IntMatrix, b: &[Int]) -> Option<(Vec<Int>, IntMatrix)> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let (d, u, v) = snf(a);
    let c = u.apply(b);
    let n = a.cols();
    let rank = (0..a.rows().min(n))
        .take_while(|&i| !d[(i, i)].is_zero())
        .count();
    let mut y = vec![Int::zero(); n];
    for i in 0..a.rows() {
        if i < rank {
            if !(&c[i] % &d[(i, i)]).is_zero() {
                return None;
            }
            y[i] = &c[i] / &d[(i, i)];
        } else if !c[i].is_zero() {
            return None;
        }
    }
    let x0 = v.apply(&y);
    let kernel_rows: Vec<Vec<Int>> = (rank..n).map(|j| v.column(j)).collect();
    let kernel = IntMatrix::from_rows(kernel_rows, n);
    let (h, _) = hnf(&kernel);
    Some((x0, h.without_zero_rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) {
                        return false;
                    }
                    if !h[(i, p)].is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        if h[(k, p)].is_negative() || h[(k, p)] >= h[(i, p)] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_trivial_cases() {
        let id = IntMatrix::identity(2);
        assert_eq!(hnf(&id), (id.clone(), id.clone()));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(hnf(&z), (z.clone(), id));
    }

    #[test]
    fn hnf_postconditions() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        assert!(is_hnf(&h));
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::diag(&[int(2), int(3)]);
        let (d, u, v) = snf(&m);
        assert_eq!(d, IntMatrix::diag(&[int(1), int(6)]));
        assert_eq!(u.mul(&m).mul(&v), d);
        let m = IntMatrix::from_i64(&[&[4, 0], &[0, 6]]);
        assert_eq!(snf(&m).0, IntMatrix::diag(&[int(2), int(12)]));
        let id = IntMatrix::identity(3);
        assert_eq!(snf(&id).0, id);
    }

    #[test]
    fn diophantine_examples() {
        assert!(solve_diophantine(&IntMatrix::from_i64(&[&[2]]), &[int(3)]).is_none());
        let (x0, k) = solve_diophantine(&IntMatrix::from_i64(&[&[1, 1]]), &[int(2)]).unwrap();
        assert_eq!(&x0[0] + &x0[1], int(2));
        assert_eq!(k, IntMatrix::from_i64(&[&[1, -1]]));
        let a = IntMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let (x0, k) = solve_diophantine(&a, &[int(6), int(3)]).unwrap();
        assert_eq!(a.apply(&x0), vec![int(6), int(3)]);
        assert_eq!(k.rows(), 1);
        assert_eq!(a.apply(k.row(0)), vec![int(0), int(0)]);
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        assert_eq!(m.det(), int(-7));
    }
}
