//! Finite cell complexes given by incidence coefficients, their chain maps,
//! subcomplexes and pairs, and exact (co)homology.

mod chain;
mod cone;
mod maps;
mod pair;
pub mod standard;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

pub use chain::{ChainComplex, Coefficients, HomologyBasis};
pub use cone::{coefficient_cone, cone_map};
pub use maps::{mapping_cylinder, ChainHomotopy, ChainMap, Cylinder};
pub use pair::{Pair, PairSequence, Subcomplex};

use crate::algebra::{CanonicalGroup, IntMatrix};

/// A cell as supplied by the user: id, dimension and boundary with incidence
/// coefficients. Faces may repeat or carry coefficient zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub boundary: Vec<(String, BigInt)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, boundary: &[(&str, i64)]) -> Self {
        Cell {
            id: id.into(),
            dim,
            boundary: boundary.iter().map(|(f, c)| (f.to_string(), BigInt::from(*c))).collect(),
        }
    }

    pub fn vertex(id: impl Into<String>) -> Self {
        Cell { id: id.into(), dim: 0, boundary: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("duplicate cell id {0}")]
    DuplicateId(String),
    #[error("cell {cell} lists unknown face {face}")]
    UnknownFace { cell: String, face: String },
    #[error("unknown cell id {0}")]
    UnknownCell(String),
    #[error("subcomplex is not closed: {cell} has face {face} outside it")]
    NotClosed { cell: String, face: String },
    #[error("chain map image of {cell} has the wrong dimension or an unknown cell")]
    BadImage { cell: String },
    #[error("not a chain map: boundary fails to commute at {cell}")]
    NotAChainMap { cell: String },
    #[error("maps do not share the complex they meet at")]
    Mismatch,
    #[error("complex is invalid: {0}")]
    Invalid(ValidationReport),
}

#[derive(Clone, Debug)]
struct CellData {
    id: String,
    dim: usize,
    boundary: Vec<(usize, BigInt)>,
}

/// Finite cell complex. Cells are indexed in insertion order; within each
/// dimension the order of insertion is also the basis order of the chain group.
#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<CellData>,
    index: HashMap<String, usize>,
    by_dim: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

/// One failed check of [`CellComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    FaceDimension { cell: String, face: String, cell_dim: usize, face_dim: usize },
    BoundaryOfBoundary { cell: String, face: String, coefficient: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceDimension { cell, face, cell_dim, face_dim } => {
                write!(f, "cell {cell} (dim {cell_dim}) has face {face} of dim {face_dim}")
            }
            Violation::BoundaryOfBoundary { cell, face, coefficient } => {
                write!(f, "boundary of boundary of {cell} has coefficient {coefficient} on {face}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Ids of every cell named in a violation, deduplicated, in report order.
    pub fn cells(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in &self.violations {
            let c = match v {
                Violation::FaceDimension { cell, .. } | Violation::BoundaryOfBoundary { cell, .. } => cell,
            };
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>) -> Result<Self, ComplexError> {
        let mut index = HashMap::with_capacity(cells.len());
        for (k, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), k).is_some() {
                return Err(ComplexError::DuplicateId(c.id.clone()));
            }
        }
        let mut data = Vec::with_capacity(cells.len());
        for c in cells {
            let mut boundary = Vec::with_capacity(c.boundary.len());
            for (face, coef) in c.boundary {
                let &k = index
                    .get(&face)
                    .ok_or_else(|| ComplexError::UnknownFace { cell: c.id.clone(), face: face.clone() })?;
                boundary.push((k, coef));
            }
            data.push(CellData { id: c.id, dim: c.dim, boundary });
        }
        let top = data.iter().map(|c| c.dim + 1).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        let mut pos = vec![0; data.len()];
        for (k, c) in data.iter().enumerate() {
            pos[k] = by_dim[c.dim].len();
            by_dim[c.dim].push(k);
        }
        Ok(CellComplex { cells: data, index, by_dim, pos })
    }

    /// Like [`CellComplex::new`] but also rejects complexes failing [`CellComplex::validate`].
    pub fn new_valid(cells: Vec<Cell>) -> Result<Self, ComplexError> {
        let k = Self::new(cells)?;
        let report = k.validate();
        if report.is_ok() {
            Ok(k)
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    pub fn empty() -> Self {
        Self::new(vec![]).expect("empty complex")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// One more than the top dimension; zero for the empty complex.
    pub fn dim_count(&self) -> usize {
        self.by_dim.len()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn cells_in_dim(&self, n: usize) -> &[usize] {
        self.by_dim.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, n: usize) -> usize {
        self.cells_in_dim(n).len()
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.cells[cell].id
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.cells[cell].dim
    }

    /// Position of the cell within the basis of its dimension.
    pub fn position(&self, cell: usize) -> usize {
        self.pos[cell]
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn boundary_of(&self, cell: usize) -> &[(usize, BigInt)] {
        &self.cells[cell].boundary
    }

    /// The cells as user-level records, in index order.
    pub fn to_cells(&self) -> Vec<Cell> {
        self.cells
            .iter()
            .map(|c| Cell {
                id: c.id.clone(),
                dim: c.dim,
                boundary: c.boundary.iter().map(|(k, v)| (self.cells[*k].id.clone(), v.clone())).collect(),
            })
            .collect()
    }

    /// Checks face dimensions and `∂∂ = 0`, naming the offending cells.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for c in &self.cells {
            for (f, _) in &c.boundary {
                let fd = self.cells[*f].dim;
                if fd + 1 != c.dim {
                    violations.push(Violation::FaceDimension {
                        cell: c.id.clone(),
                        face: self.cells[*f].id.clone(),
                        cell_dim: c.dim,
                        face_dim: fd,
                    });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for c in &self.cells {
            let mut acc: Vec<(usize, BigInt)> = Vec::new();
            for (f, a) in &c.boundary {
                for (g, b) in &self.cells[*f].boundary {
                    match acc.iter_mut().find(|(k, _)| k == g) {
                        Some((_, v)) => *v += a * b,
                        None => acc.push((*g, a * b)),
                    }
                }
            }
            for (g, v) in acc {
                if !v.is_zero() {
                    violations.push(Violation::BoundaryOfBoundary {
                        cell: c.id.clone(),
                        face: self.cells[g].id.clone(),
                        coefficient: v.to_string(),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// `∂_n : C_n → C_{n-1}` in the cell bases (`∂_0` has zero rows).
    pub fn boundary_matrix(&self, n: usize) -> IntMatrix {
        let cols = self.count(n);
        let rows = if n == 0 { 0 } else { self.count(n - 1) };
        let mut entries = Vec::new();
        for &c in self.cells_in_dim(n) {
            for (f, v) in &self.cells[c].boundary {
                if n > 0 && !v.is_zero() {
                    entries.push((self.pos[*f], self.pos[c], v.clone()));
                }
            }
        }
        IntMatrix::from_triplets(rows, cols, entries)
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::new((0..self.dim_count()).map(|n| self.boundary_matrix(n)).collect())
    }

    pub fn homology(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        self.chain_complex().homology_with(n, coeffs)
    }

    pub fn cohomology(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        self.chain_complex().cohomology_with(n, coeffs)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.dim_count()).map(|n| if n % 2 == 0 { self.count(n) as i64 } else { -(self.count(n) as i64) }).sum()
    }

    /// Identical ids, dimensions and boundaries, in the same order.
    pub fn same_cells(&self, other: &CellComplex) -> bool {
        self.len() == other.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a.id == b.id && a.dim == b.dim && a.boundary == b.boundary)
    }

    /// Ids of the faces of `cell` listed in its boundary, with repeats removed.
    pub fn faces(&self, cell: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells[cell].boundary.iter().map(|(f, _)| *f).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Same complex with every id passed through `rename`.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<CellComplex, ComplexError> {
        let cells = self
            .to_cells()
            .into_iter()
            .map(|c| Cell {
                id: rename(&c.id),
                dim: c.dim,
                boundary: c.boundary.into_iter().map(|(f, v)| (rename(&f), v)).collect(),
            })
            .collect();
        CellComplex::new(cells)
    }

    /// Chain in dimension `n` as a dense coordinate vector.
    pub fn chain_vector(&self, n: usize, chain: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.count(n)];
        for (c, x) in chain {
            debug_assert_eq!(self.cells[*c].dim, n);
            v[self.pos[*c]] += x;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn minimal_circle_is_valid() {
        let c = circle();
        assert!(c.validate().is_ok());
        assert_eq!(c.homology(0, &Coefficients::Integers).to_string(), "Z");
        assert_eq!(c.homology(1, &Coefficients::Integers).to_string(), "Z");
    }

    #[test]
    fn inconsistent_edge_is_reported() {
        let k = CellComplex::new(vec![
            Cell::vertex("v"),
            Cell::vertex("w"),
            Cell::new("e", 1, &[("v", 1), ("w", -1)]),
            Cell::new("f", 2, &[("e", 1), ("e", 1)]),
        ])
        .unwrap();
        let r = k.validate();
        assert!(!r.is_ok());
        assert_eq!(r.cells(), vec!["f".to_string()]);
    }

    #[test]
    fn hollow_triangle_and_torus() {
        let t = hollow_triangle();
        assert!(t.validate().is_ok());
        assert_eq!(t.homology(1, &Coefficients::Integers), CanonicalGroup::free(1));
        let torus = torus();
        assert!(torus.validate().is_ok());
        assert_eq!(torus.homology(1, &Coefficients::Integers), CanonicalGroup::free(2));
        assert_eq!(torus.homology(2, &Coefficients::Integers), CanonicalGroup::free(1));
    }

    #[test]
    fn point_dimension() {
        let p = point();
        assert_eq!(p.homology(0, &Coefficients::Integers), CanonicalGroup::free(1));
        for n in 1..4 {
            assert!(p.homology(n, &Coefficients::Integers).is_zero());
        }
    }

    #[test]
    fn duplicate_and_unknown_ids() {
        assert!(matches!(
            CellComplex::new(vec![Cell::vertex("a"), Cell::vertex("a")]),
            Err(ComplexError::DuplicateId(_))
        ));
        assert!(matches!(
            CellComplex::new(vec![Cell::new("e", 1, &[("x", 1)])]),
            Err(ComplexError::UnknownFace { .. })
        ));
    }
}
