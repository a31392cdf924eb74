//! Reference computations for the integration tests, written from scratch
//! so they share no code path with the library's Smith normal form,
//! limit calculus, or set engine.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thom::algebra::CanonicalGroup;
use thom::complexes::CellComplex;

/// Nonzero diagonal entries after diagonalizing by unimodular row and
/// column operations (not normalized to a divisibility chain).
pub fn diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&p);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&p);
                for row in m.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest nonzero entry of row t / column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && (m[best.0][best.1].is_zero() || m[i][t].abs() < m[best.0][best.1].abs()) {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Boundary matrix `C_n → C_{n-1}` restricted to cells satisfying `keep`,
/// read off the cell list.
pub fn boundary(k: &CellComplex, n: usize, keep: &dyn Fn(&str) -> bool) -> (usize, usize, Vec<Vec<BigInt>>) {
    let cells = k.to_cells();
    let col_ids: Vec<&str> = cells.iter().filter(|c| c.dim == n && keep(&c.id)).map(|c| c.id.as_str()).collect();
    let row_ids: Vec<&str> =
        if n == 0 { vec![] } else { cells.iter().filter(|c| c.dim == n - 1 && keep(&c.id)).map(|c| c.id.as_str()).collect() };
    let row_of: HashMap<&str, usize> = row_ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut m = vec![vec![BigInt::zero(); col_ids.len()]; row_ids.len()];
    for (j, id) in col_ids.iter().enumerate() {
        let c = cells.iter().find(|c| c.id == *id).unwrap();
        for (f, v) in &c.boundary {
            if let Some(&i) = row_of.get(f.as_str()) {
                m[i][j] += v;
            }
        }
    }
    (row_ids.len(), col_ids.len(), m)
}

/// `H_n` of the chain complex of cells satisfying `keep` (a quotient
/// complex when `keep` drops a subcomplex).
pub fn homology(k: &CellComplex, n: usize, keep: &dyn Fn(&str) -> bool) -> CanonicalGroup {
    let (_, cells_n, d_n) = boundary(k, n, keep);
    let (_, _, d_up) = boundary(k, n + 1, keep);
    let rank_n = diagonal(d_n).len();
    let inv_up = diagonal(d_up);
    let torsion: Vec<BigInt> = inv_up.iter().filter(|d| !d.is_one()).cloned().collect();
    CanonicalGroup::new(cells_n - rank_n - inv_up.len(), torsion)
}

pub fn absolute_homology(k: &CellComplex, n: usize) -> CanonicalGroup {
    homology(k, n, &|_| true)
}

/// Rational model of `colim(Z --m--> Z --m--> …)`: the element `a` at
/// level `k` is `a / m^k`.
pub fn localized_equal(m: i64, a: i64, k: u32, b: i64, l: u32) -> bool {
    BigInt::from(a) * BigInt::from(m).pow(l) == BigInt::from(b) * BigInt::from(m).pow(k)
}

/// Index `[Z : image of m^j]`, i.e. the images in the tower `×m` at depth `j`.
pub fn image_index(m: i64, j: u32) -> BigInt {
    BigInt::from(m).pow(j)
}

/// Points of `[1, w]²` satisfying `pred`.
pub fn window_count(w: u64, pred: impl Fn(u64, u64) -> bool) -> usize {
    (1..=w).flat_map(|i| (1..=w).map(move |j| (i, j))).filter(|&(i, j)| pred(i, j)).count()
}
