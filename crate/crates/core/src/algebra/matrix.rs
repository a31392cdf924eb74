use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Matrices with both sides below this size are stored densely.
pub const DENSE_LIMIT: usize = 64;

#[derive(Clone, Debug)]
enum Store {
    Dense(Vec<BigInt>),
    /// One ordered map per row, zero entries never stored.
    Sparse(Vec<BTreeMap<usize, BigInt>>),
}

/// Arbitrary-precision integer matrix.
///
/// Storage is sparse by rows; matrices smaller than 64×64 fall back to a
/// dense buffer. Equality compares entries, never storage.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    store: Store,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let store = if rows < DENSE_LIMIT && cols < DENSE_LIMIT {
            Store::Dense(vec![BigInt::zero(); rows * cols])
        } else {
            Store::Sparse(vec![BTreeMap::new(); rows])
        };
        IntMatrix { rows, cols, store }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from small integer rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, BigInt::from(v));
                }
            }
        }
        m
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in entries {
            m.add_at(i, j, &v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.store {
            Store::Dense(d) => d[i * self.cols + j].clone(),
            Store::Sparse(s) => s[i].get(&j).cloned().unwrap_or_default(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &mut self.store {
            Store::Dense(d) => d[i * self.cols + j] = v,
            Store::Sparse(s) => {
                if v.is_zero() {
                    s[i].remove(&j);
                } else {
                    s[i].insert(j, v);
                }
            }
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Nonzero entries of row `i` in column order.
    pub fn row_entries(&self, i: usize) -> Vec<(usize, BigInt)> {
        match &self.store {
            Store::Dense(d) => (0..self.cols)
                .filter_map(|j| {
                    let v = &d[i * self.cols + j];
                    (!v.is_zero()).then(|| (j, v.clone()))
                })
                .collect(),
            Store::Sparse(s) => s[i].iter().map(|(&j, v)| (j, v.clone())).collect(),
        }
    }

    /// All nonzero entries in row-major order.
    pub fn nonzero(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for (j, v) in self.row_entries(i) {
                out.push((i, j, v));
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        match &self.store {
            Store::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Store::Sparse(s) => s.iter().map(|r| r.len()).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); self.cols];
        for (j, v) in self.row_entries(i) {
            r[j] = v;
        }
        r
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.nonzero() {
            t.set(j, i, v);
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        let other_rows: Vec<Vec<(usize, BigInt)>> = (0..other.rows).map(|k| other.row_entries(k)).collect();
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (k, a) in self.row_entries(i) {
                for (j, b) in &other_rows[k] {
                    *acc.entry(*j).or_default() += &a * b;
                }
            }
            for (j, v) in acc {
                if !v.is_zero() {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, a) in self.row_entries(i) {
                    s += a * &v[j];
                }
                s
            })
            .collect()
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (k, &j) in cols.iter().enumerate() {
            col_pos[j] = k;
        }
        let mut out = Self::zeros(rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for (j, v) in self.row_entries(i) {
                if col_pos[j] != usize::MAX {
                    out.set(r, col_pos[j], v);
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for (i, j, v) in self.nonzero() {
            out.set(i, j, v);
        }
        for (i, j, v) in other.nonzero() {
            out.set(i, self.cols + j, v);
        }
        out
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// True when the matrix is diagonal with nonnegative entries forming a divisor chain.
    pub fn is_smith_form(&self) -> bool {
        for (i, j, v) in self.nonzero() {
            if i != j || v.is_negative() {
                return false;
            }
        }
        let n = self.rows.min(self.cols);
        let full: Vec<BigInt> = (0..n).map(|k| self.get(k, k)).collect();
        for k in 1..n {
            let (a, b) = (&full[k - 1], &full[k]);
            if a.is_zero() {
                if !b.is_zero() {
                    return false;
                }
            } else if !(b % a).is_zero() {
                return false;
            }
        }
        true
    }
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.nonzero() == other.nonzero()
    }
}

impl Eq for IntMatrix {}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", r.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_switches_at_the_limit() {
        assert!(IntMatrix::zeros(63, 63).is_dense());
        assert!(!IntMatrix::zeros(64, 3).is_dense());
    }

    #[test]
    fn dense_and_sparse_agree_on_products() {
        let mut a = IntMatrix::zeros(70, 3);
        let mut b = IntMatrix::zeros(3, 2);
        a.set(69, 2, BigInt::from(5));
        a.set(0, 0, BigInt::from(-1));
        b.set(2, 1, BigInt::from(7));
        b.set(0, 0, BigInt::from(2));
        let c = a.mul(&b);
        assert_eq!(c.get(69, 1), BigInt::from(35));
        assert_eq!(c.get(0, 0), BigInt::from(-2));
        assert_eq!(c.nnz(), 2);
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let m = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        assert_eq!(m.determinant(), BigInt::from(-3));
    }
}
