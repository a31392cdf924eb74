//! Sublattices of `Z^n` and their subquotients.
//!
//! A subquotient `N / D` (with `D ⊆ N ⊆ Z^n`) is presented in canonical form
//! together with representative vectors for every canonical generator and a
//! coordinate map back onto those generators. This is what homology with
//! explicit bases, induced maps and connecting maps are built from.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::CanonicalGroup;
use super::matrix::IntMatrix;
use super::snf::smith_decomposition;

/// A sublattice `L ⊆ Z^n` with a basis and an exact coordinate map.
///
/// For `x ∈ L`, coordinate `k` is `(coord_rows[k] · x) / divisors[k]`;
/// membership additionally requires every `zero_rows` product to vanish.
#[derive(Clone, Debug)]
pub struct SubLattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    coord_rows: Vec<Vec<BigInt>>,
    divisors: Vec<BigInt>,
    zero_rows: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

impl SubLattice {
    /// The whole of `Z^n`.
    pub fn full(n: usize) -> Self {
        let id = IntMatrix::identity(n).to_rows();
        SubLattice { ambient: n, basis: id.clone(), coord_rows: id, divisors: vec![BigInt::one(); n], zero_rows: vec![] }
    }

    /// Kernel of `m` acting on column vectors of length `m.cols()`.
    pub fn kernel(m: &IntMatrix) -> Self {
        let n = m.cols();
        if m.rows() == 0 || m.is_zero() {
            return Self::full(n);
        }
        let f = smith_decomposition(m);
        let r = f.rank();
        let basis = (r..n).map(|k| f.v.column(k)).collect();
        let coord_rows: Vec<Vec<BigInt>> = (r..n).map(|k| f.v_inv.row(k)).collect();
        let zero_rows = (0..r).map(|k| f.v_inv.row(k)).collect();
        SubLattice { ambient: n, basis, divisors: vec![BigInt::one(); coord_rows.len()], coord_rows, zero_rows }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn image(m: &IntMatrix) -> Self {
        let n = m.rows();
        if m.cols() == 0 || m.is_zero() {
            return SubLattice {
                ambient: n,
                basis: vec![],
                coord_rows: vec![],
                divisors: vec![],
                zero_rows: IntMatrix::identity(n).to_rows(),
            };
        }
        let f = smith_decomposition(m);
        let r = f.rank();
        let basis = (0..r)
            .map(|k| f.u_inv.column(k).into_iter().map(|x| x * &f.diagonal[k]).collect())
            .collect();
        let coord_rows = (0..r).map(|k| f.u.row(k)).collect();
        let zero_rows = (r..n).map(|k| f.u.row(k)).collect();
        SubLattice { ambient: n, basis, coord_rows, divisors: f.diagonal.clone(), zero_rows }
    }

    /// Lattice spanned by a list of vectors of length `n`.
    pub fn span(vectors: &[Vec<BigInt>], n: usize) -> Self {
        Self::image(&IntMatrix::from_columns(vectors, n))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Coordinates of `x` in the basis, or `None` when `x ∉ L`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.ambient, "vector length does not match ambient rank");
        if self.zero_rows.iter().any(|r| !dot(r, x).is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(self.basis.len());
        for (row, d) in self.coord_rows.iter().zip(&self.divisors) {
            let (q, rem) = dot(row, x).div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }

    /// True when every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &SubLattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_as(&self, other: &SubLattice) -> bool {
        self.contains_lattice(other) && other.contains_lattice(self)
    }
}

/// Canonical presentation of a subquotient `N / D`.
///
/// Generators are ordered free first, then torsion in divisor-chain order.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: CanonicalGroup,
    numerator: SubLattice,
    /// `U` of the Smith form of the relation matrix, restricted to kept rows.
    transform_rows: Vec<Vec<BigInt>>,
    /// Modulus of each kept generator (zero for free generators).
    moduli: Vec<BigInt>,
    reps: Vec<Vec<BigInt>>,
}

/// Error raised when a denominator vector is not in the numerator lattice.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("denominator generator {index} is not contained in the numerator lattice")]
pub struct NotContained {
    pub index: usize,
}

impl Presentation {
    pub fn new(numerator: SubLattice, denominator: &[Vec<BigInt>]) -> Result<Self, NotContained> {
        let k = numerator.rank();
        let mut rel_cols = Vec::with_capacity(denominator.len());
        for (index, d) in denominator.iter().enumerate() {
            rel_cols.push(numerator.coords(d).ok_or(NotContained { index })?);
        }
        let rel = IntMatrix::from_columns(&rel_cols, k);
        let (u, u_inv, diag) = if rel.cols() == 0 || rel.is_zero() {
            (IntMatrix::identity(k), IntMatrix::identity(k), vec![])
        } else {
            let f = smith_decomposition(&rel);
            (f.u, f.u_inv, f.diagonal)
        };
        let r = diag.len();
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_one() {
                tors.push((i, d.clone()));
            }
        }
        for i in r..k {
            free.push(i);
        }
        let mut transform_rows = Vec::new();
        let mut moduli = Vec::new();
        let mut reps = Vec::new();
        let lift = |i: usize| -> Vec<BigInt> {
            let c = u_inv.column(i);
            let mut v = vec![BigInt::zero(); numerator.ambient()];
            for (coef, b) in c.iter().zip(numerator.basis()) {
                if coef.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(b) {
                    *x += coef * y;
                }
            }
            v
        };
        for &i in &free {
            transform_rows.push(u.row(i));
            moduli.push(BigInt::zero());
            reps.push(lift(i));
        }
        for (i, d) in &tors {
            transform_rows.push(u.row(*i));
            moduli.push(d.clone());
            reps.push(lift(*i));
        }
        let group = CanonicalGroup::new(free.len(), tors.into_iter().map(|(_, d)| d).collect());
        Ok(Presentation { group, numerator, transform_rows, moduli, reps })
    }

    /// Representative vector of each canonical generator.
    pub fn representatives(&self) -> &[Vec<BigInt>] {
        &self.reps
    }

    pub fn numerator(&self) -> &SubLattice {
        &self.numerator
    }

    /// Canonical coordinates of `x ∈ N`, torsion entries reduced into `[0, d)`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.numerator.coords(x)?;
        Some(
            self.transform_rows
                .iter()
                .zip(&self.moduli)
                .map(|(row, m)| {
                    let v = dot(row, &c);
                    if m.is_zero() {
                        v
                    } else {
                        v.mod_floor(m)
                    }
                })
                .collect(),
        )
    }
}
