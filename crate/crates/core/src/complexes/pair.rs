use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Cell, CellComplex, ChainComplex, ChainMap, Coefficients, ComplexError};
use crate::algebra::{is_exact_at, CanonicalGroup, GroupMap, IntMatrix};

/// A set of cells of a parent complex closed under taking faces.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    parent: Arc<CellComplex>,
    member: Vec<bool>,
}

impl Subcomplex {
    pub fn from_mask(parent: Arc<CellComplex>, member: Vec<bool>) -> Result<Self, ComplexError> {
        assert_eq!(member.len(), parent.len(), "mask length must match the complex");
        for c in 0..parent.len() {
            if member[c] {
                if let Some(f) = parent.faces(c).into_iter().find(|&f| !member[f]) {
                    return Err(ComplexError::NotClosed { cell: parent.id(c).into(), face: parent.id(f).into() });
                }
            }
        }
        Ok(Subcomplex { parent, member })
    }

    pub fn new<S: AsRef<str>>(parent: Arc<CellComplex>, ids: &[S]) -> Result<Self, ComplexError> {
        let mut member = vec![false; parent.len()];
        for id in ids {
            let c = parent.lookup(id.as_ref()).ok_or_else(|| ComplexError::UnknownCell(id.as_ref().into()))?;
            member[c] = true;
        }
        Self::from_mask(parent, member)
    }

    /// Smallest subcomplex containing the given cells.
    pub fn closure(parent: Arc<CellComplex>, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut member = vec![false; parent.len()];
        let mut stack: Vec<usize> = cells.into_iter().collect();
        while let Some(c) = stack.pop() {
            if !member[c] {
                member[c] = true;
                stack.extend(parent.faces(c));
            }
        }
        Subcomplex { parent, member }
    }

    pub fn empty(parent: Arc<CellComplex>) -> Self {
        let n = parent.len();
        Subcomplex { parent, member: vec![false; n] }
    }

    pub fn full(parent: Arc<CellComplex>) -> Self {
        let n = parent.len();
        Subcomplex { parent, member: vec![true; n] }
    }

    pub fn skeleton(parent: Arc<CellComplex>, k: usize) -> Self {
        let member = (0..parent.len()).map(|c| parent.dim(c) <= k).collect();
        Subcomplex { parent, member }
    }

    pub fn parent(&self) -> &Arc<CellComplex> {
        &self.parent
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.member[cell]
    }

    pub fn mask(&self) -> &[bool] {
        &self.member
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&c| self.member[c]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.member.iter().zip(&other.member).all(|(a, b)| !a || *b)
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        let member = self.member.iter().zip(&other.member).map(|(a, b)| *a || *b).collect();
        Subcomplex { parent: self.parent.clone(), member }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        let member = self.member.iter().zip(&other.member).map(|(a, b)| *a && *b).collect();
        Subcomplex { parent: self.parent.clone(), member }
    }

    /// The subcomplex as a complex in its own right, keeping ids and order.
    pub fn as_complex(&self) -> CellComplex {
        let keep = self.cells();
        let cells = keep
            .iter()
            .map(|&c| Cell {
                id: self.parent.id(c).to_string(),
                dim: self.parent.dim(c),
                boundary: self.parent.boundary_of(c).iter().map(|(f, v)| (self.parent.id(*f).to_string(), v.clone())).collect(),
            })
            .collect();
        CellComplex::new(cells).expect("subcomplex of a valid complex")
    }

    /// Inclusion chain map into the parent.
    pub fn inclusion(&self) -> ChainMap {
        let sub = Arc::new(self.as_complex());
        let images = self.cells().into_iter().map(|c| vec![(c, BigInt::one())]).collect();
        ChainMap::from_images(sub, self.parent.clone(), images).expect("inclusions are chain maps")
    }
}

/// A complex with a subcomplex.
#[derive(Clone, Debug)]
pub struct Pair {
    pub complex: Arc<CellComplex>,
    pub sub: Subcomplex,
}

impl Pair {
    pub fn new(complex: Arc<CellComplex>, sub: Subcomplex) -> Result<Self, ComplexError> {
        if !Arc::ptr_eq(&complex, sub.parent()) {
            return Err(ComplexError::Mismatch);
        }
        Ok(Pair { complex, sub })
    }

    pub fn absolute(complex: Arc<CellComplex>) -> Self {
        let sub = Subcomplex::empty(complex.clone());
        Pair { complex, sub }
    }

    /// Per dimension, basis positions of the cells outside the subcomplex.
    fn kept_positions(&self) -> Vec<Vec<usize>> {
        (0..self.complex.dim_count())
            .map(|n| {
                self.complex
                    .cells_in_dim(n)
                    .iter()
                    .filter(|&&c| !self.sub.contains(c))
                    .map(|&c| self.complex.position(c))
                    .collect()
            })
            .collect()
    }

    /// `C_*(X) / C_*(A)` on the basis of cells of `X ∖ A`.
    pub fn relative_chain_complex(&self) -> ChainComplex {
        self.complex.chain_complex().quotient(&self.kept_positions())
    }

    pub fn relative_homology(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        self.relative_chain_complex().homology_with(n, coeffs)
    }

    pub fn relative_cohomology(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        self.relative_chain_complex().cohomology_with(n, coeffs)
    }

    /// Maps of the long exact sequence of the pair around degree `n`.
    pub fn sequence(&self, n: usize) -> PairSequence {
        PairSequence::new(self, n)
    }

    /// Exactness of the long exact sequence at every node in degrees `0..=top`,
    /// each entry labelled by the node.
    pub fn exactness(&self, top: usize) -> Vec<(String, bool)> {
        let seqs: Vec<PairSequence> = (0..=top + 1).map(|n| self.sequence(n)).collect();
        let mut out = Vec::new();
        for n in 0..=top {
            let s = &seqs[n];
            let up = &seqs[n + 1];
            out.push((format!("H{n}(A)"), is_exact_at(&up.connecting, &s.inclusion).unwrap_or(false)));
            out.push((format!("H{n}(X)"), is_exact_at(&s.inclusion, &s.projection).unwrap_or(false)));
            out.push((format!("H{n}(X,A)"), is_exact_at(&s.projection, &s.connecting).unwrap_or(false)));
        }
        out
    }
}

/// `H_n(A) → H_n(X) → H_n(X,A) → H_{n-1}(A)`.
#[derive(Clone, Debug)]
pub struct PairSequence {
    pub degree: usize,
    pub inclusion: GroupMap,
    pub projection: GroupMap,
    pub connecting: GroupMap,
}

impl PairSequence {
    fn new(pair: &Pair, n: usize) -> Self {
        let x = &pair.complex;
        let a_complex = pair.sub.as_complex();
        let hx = x.chain_complex().homology_basis(n);
        let rel = pair.relative_chain_complex();
        let hr = rel.homology_basis(n);
        let inclusion = pair.sub.inclusion().induced_map(n);

        // cycle of X, restricted to the cells outside A
        let kept: Vec<usize> = x.cells_in_dim(n).iter().copied().filter(|&c| !pair.sub.contains(c)).collect();
        let cols: Vec<Vec<BigInt>> = hx
            .representatives()
            .iter()
            .map(|z| {
                let v: Vec<BigInt> = kept.iter().map(|&c| z[x.position(c)].clone()).collect();
                hr.class_of(&v).expect("restriction of a cycle is a relative cycle")
            })
            .collect();
        let projection = map_from_columns(hx.group(), hr.group(), cols);

        let connecting = if n == 0 {
            GroupMap::zero(hr.group(), &CanonicalGroup::zero())
        } else {
            let ha = a_complex.chain_complex().homology_basis(n - 1);
            let d = x.boundary_matrix(n);
            let below: Vec<usize> = x.cells_in_dim(n - 1).iter().copied().filter(|&c| pair.sub.contains(c)).collect();
            let cols = hr
                .representatives()
                .iter()
                .map(|z| {
                    let mut lift = vec![BigInt::zero(); x.count(n)];
                    for (k, &c) in kept.iter().enumerate() {
                        lift[x.position(c)] = z[k].clone();
                    }
                    let b = d.mul_vec(&lift);
                    let restricted: Vec<BigInt> = below.iter().map(|&c| b[x.position(c)].clone()).collect();
                    ha.class_of(&restricted).expect("boundary of a relative cycle is a cycle of the subcomplex")
                })
                .collect();
            map_from_columns(hr.group(), ha.group(), cols)
        };
        PairSequence { degree: n, inclusion, projection, connecting }
    }
}

fn map_from_columns(source: &CanonicalGroup, target: &CanonicalGroup, cols: Vec<Vec<BigInt>>) -> GroupMap {
    let m = IntMatrix::from_columns(&cols, target.generators());
    GroupMap::new(source.clone(), target.clone(), m).expect("maps induced by chain maps are well defined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::standard::*;

    #[test]
    fn disk_relative_to_boundary() {
        let (disk, rim) = disk_pair();
        let pair = Pair::new(disk.clone(), rim).unwrap();
        let z = Coefficients::Integers;
        assert_eq!(pair.relative_homology(2, &z), CanonicalGroup::free(1));
        assert!(pair.relative_homology(1, &z).is_zero());
        assert!(pair.relative_homology(0, &z).is_zero());
        assert!(pair.exactness(2).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn trivial_pairs() {
        let t = Arc::new(torus());
        let z = Coefficients::Integers;
        let all = Pair::new(t.clone(), Subcomplex::full(t.clone())).unwrap();
        let none = Pair::absolute(t.clone());
        for n in 0..3 {
            assert!(all.relative_homology(n, &z).is_zero());
            assert_eq!(none.relative_homology(n, &z), t.homology(n, &z));
        }
        assert!(all.exactness(2).iter().all(|(_, ok)| *ok));
        assert!(none.exactness(2).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn open_subsets_are_not_subcomplexes() {
        let c = Arc::new(circle());
        assert!(matches!(Subcomplex::new(c, &["e"]), Err(ComplexError::NotClosed { .. })));
    }
}
