//! Smith normal form.
//!
//! Two kernels live here: [`smith_decomposition`] tracks both unimodular
//! transforms and their inverses on a dense work copy, and
//! [`smith_invariants`] runs a sparse Markowitz-pivoted elimination that only
//! returns the invariant factors. Homology groups use the second one; explicit
//! bases (induced maps, connecting maps) need the first.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Full decomposition `U·M·V = S` with the inverses of both transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// The nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Returns `(S, U, V)` with `U·M·V = S` in Smith normal form.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let f = smith_decomposition(m);
    (f.s, f.u, f.v)
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    ui: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    vi: Vec<Vec<BigInt>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

impl Work {
    // row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (src, dst) = pair_mut(&mut self.a, t, i);
        axpy(dst, src, q);
        let (src, dst) = pair_mut(&mut self.u, t, i);
        axpy(dst, src, q);
        for row in self.ui.iter_mut() {
            let add = q * &row[i];
            row[t] += add;
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.ui.iter_mut() {
            row.swap(i, j);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        for x in self.u[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        for row in self.ui.iter_mut() {
            row[i] = -std::mem::take(&mut row[i]);
        }
    }

    // col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in self.a.iter_mut() {
            let sub = q * &row[t];
            row[j] -= sub;
        }
        for row in self.v.iter_mut() {
            let sub = q * &row[t];
            row[j] -= sub;
        }
        let (src, dst) = pair_mut(&mut self.vi, j, t);
        // row_t += q * row_j
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d += q * s;
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.vi.swap(i, j);
    }
}

/// Borrows row `src` immutably and row `dst` mutably.
fn pair_mut(rows: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&[BigInt], &mut [BigInt]) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

/// Dense Smith decomposition with transforms and inverses.
pub fn smith_decomposition(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.to_rows(),
        u: identity_rows(r),
        ui: identity_rows(r),
        v: identity_rows(c),
        vi: identity_rows(c),
    };
    let mut diagonal = Vec::new();
    for t in 0..r.min(c) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !w.a[i][j].is_zero() {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => w.a[i][j].abs() < w.a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let p = w.a[t][t].clone();
            for i in t + 1..r {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&p);
                    w.row_sub(i, t, &q);
                }
            }
            if let Some(i) = min_nonzero((t + 1..r).map(|i| (i, &w.a[i][t]))) {
                w.row_swap(t, i);
                continue;
            }
            for j in t + 1..c {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&p);
                    w.col_sub(j, t, &q);
                }
            }
            if let Some(j) = min_nonzero((t + 1..c).map(|j| (j, &w.a[t][j]))) {
                w.col_swap(t, j);
                continue;
            }
            // pivot is isolated; enforce divisibility of the trailing block
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&w.a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => w.row_sub(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.row_neg(t);
        }
        diagonal.push(w.a[t][t].clone());
    }
    SmithForm {
        s: IntMatrix::from_big_rows(&w.a, c),
        u: IntMatrix::from_big_rows(&w.u, r),
        v: IntMatrix::from_big_rows(&w.v, c),
        u_inv: IntMatrix::from_big_rows(&w.ui, r),
        v_inv: IntMatrix::from_big_rows(&w.vi, c),
        diagonal,
    }
}

fn min_nonzero<'a>(it: impl Iterator<Item = (usize, &'a BigInt)>) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for (k, v) in it {
        if v.is_zero() {
            continue;
        }
        let a = v.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some((k, a));
        }
    }
    best.map(|(k, _)| k)
}

/// Rank and invariant factors of a matrix, without transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    /// Positive invariant factors `d_1 | … | d_rank` (unit factors included).
    pub divisors: Vec<BigInt>,
}

impl Invariants {
    /// The invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Sparse {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Sparse {
    // row_i -= q * row_p
    fn row_sub(&mut self, i: usize, p: usize, q: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[p].iter().map(|(&j, v)| (j, v.clone())).collect();
        for (j, v) in src {
            let e = self.rows[i].entry(j).or_default();
            *e -= q * v;
            if e.is_zero() {
                self.rows[i].remove(&j);
                self.cols[j].remove(&i);
            } else {
                self.cols[j].insert(i);
            }
        }
    }

    // col_j -= q * col_c
    fn col_sub(&mut self, j: usize, c: usize, q: &BigInt) {
        let src: Vec<usize> = self.cols[c].iter().copied().collect();
        for i in src {
            let v = self.rows[i][&c].clone();
            let e = self.rows[i].entry(j).or_default();
            *e -= q * v;
            if e.is_zero() {
                self.rows[i].remove(&j);
                self.cols[j].remove(&i);
            } else {
                self.cols[j].insert(i);
            }
        }
    }

    fn drop_row(&mut self, p: usize) {
        let keys: Vec<usize> = self.rows[p].keys().copied().collect();
        for j in keys {
            self.cols[j].remove(&p);
        }
        self.rows[p].clear();
    }

    fn pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(bool, BigInt, usize, usize, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                let a = v.abs();
                let unit = a.is_one();
                let cost = (row.len() - 1) * (self.cols[j].len() - 1);
                let key_better = match &best {
                    None => true,
                    Some((bu, ba, bc, _, _)) => {
                        if unit != *bu {
                            unit
                        } else if unit {
                            cost < *bc
                        } else {
                            a < *ba || (a == *ba && cost < *bc)
                        }
                    }
                };
                if key_better {
                    best = Some((unit, a, cost, i, j));
                }
            }
        }
        best.map(|(_, _, _, i, j)| (i, j))
    }
}

/// Sparse elimination returning the rank and invariant factors of `m`.
pub fn smith_invariants(m: &IntMatrix) -> Invariants {
    let mut sp = Sparse { rows: vec![BTreeMap::new(); m.rows()], cols: vec![BTreeSet::new(); m.cols()] };
    for (i, j, v) in m.nonzero() {
        sp.rows[i].insert(j, v);
        sp.cols[j].insert(i);
    }
    let mut diag = Vec::new();
    while let Some((mut p, mut c)) = sp.pivot() {
        loop {
            let a = sp.rows[p][&c].clone();
            let others: Vec<usize> = sp.cols[c].iter().copied().filter(|&i| i != p).collect();
            for i in others {
                let q = sp.rows[i][&c].div_floor(&a);
                sp.row_sub(i, p, &q);
            }
            let rest: Vec<(usize, BigInt)> =
                sp.cols[c].iter().filter(|&&i| i != p).map(|&i| (i, sp.rows[i][&c].clone())).collect();
            if let Some(i) = min_nonzero(rest.iter().map(|(i, v)| (*i, v))) {
                p = i;
                continue;
            }
            let others: Vec<usize> = sp.rows[p].keys().copied().filter(|&j| j != c).collect();
            for j in others {
                let q = sp.rows[p][&j].div_floor(&a);
                sp.col_sub(j, c, &q);
            }
            let rest: Vec<(usize, BigInt)> =
                sp.rows[p].iter().filter(|(&j, _)| j != c).map(|(&j, v)| (j, v.clone())).collect();
            if let Some(j) = min_nonzero(rest.iter().map(|(j, v)| (*j, v))) {
                c = j;
                continue;
            }
            break;
        }
        diag.push(sp.rows[p][&c].abs());
        sp.drop_row(p);
    }
    let divisors = diagonal_to_chain(diag);
    Invariants { rank: divisors.len(), divisors }
}

/// Turns any list of positive diagonal entries into the equivalent divisor chain.
pub fn diagonal_to_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_decomposition(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s);
        assert!(f.s.is_smith_form());
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        f
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let f = check(&m);
        assert_eq!(f.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(smith_invariants(&m).divisors, f.diagonal);
    }

    #[test]
    fn zero_and_identity() {
        let z = IntMatrix::zeros(3, 3);
        let (s, _, _) = smith_normal_form(&z);
        assert_eq!(s, z);
        let id = IntMatrix::identity(4);
        let (s, _, _) = smith_normal_form(&id);
        assert_eq!(s, id);
    }

    #[test]
    fn rectangular_and_sparse_paths_agree() {
        let m = IntMatrix::from_rows(&[vec![0, 6, 0, 4], vec![3, 0, 9, 0], vec![0, 10, 0, 2]]);
        let f = check(&m);
        assert_eq!(smith_invariants(&m).divisors, f.diagonal);
    }

    #[test]
    fn diagonal_chain_normalization() {
        let d = diagonal_to_chain(vec![BigInt::from(4), BigInt::from(6), BigInt::from(1)]);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(2), BigInt::from(12)]);
    }
}
