use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Cell, CellComplex, ComplexError, HomologyBasis};
use crate::algebra::{GroupMap, IntMatrix};

type Chain = Vec<(usize, BigInt)>;

/// Adds `coef · chain` into a sparse accumulator, keeping entries sorted and nonzero.
fn accumulate(acc: &mut Chain, chain: &[(usize, BigInt)], coef: &BigInt) {
    for (c, v) in chain {
        let x = v * coef;
        match acc.binary_search_by_key(c, |(k, _)| *k) {
            Ok(i) => {
                acc[i].1 += x;
                if acc[i].1.is_zero() {
                    acc.remove(i);
                }
            }
            Err(i) => {
                if !x.is_zero() {
                    acc.insert(i, (*c, x));
                }
            }
        }
    }
}

fn normalize(chain: &[(usize, BigInt)]) -> Chain {
    let mut acc = Vec::new();
    accumulate(&mut acc, chain, &BigInt::one());
    acc
}

fn boundary_chain(k: &CellComplex, chain: &[(usize, BigInt)]) -> Chain {
    let mut acc = Vec::new();
    for (c, v) in chain {
        accumulate(&mut acc, k.boundary_of(*c), v);
    }
    acc
}

fn same_complex(a: &Arc<CellComplex>, b: &Arc<CellComplex>) -> bool {
    Arc::ptr_eq(a, b) || a.same_cells(b)
}

/// Cellular chain map, one integer chain of the same dimension per source cell.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<CellComplex>,
    pub target: Arc<CellComplex>,
    images: Vec<Chain>,
}

impl ChainMap {
    /// Builds a chain map from images given by id. Unlisted cells map to zero.
    pub fn new(
        source: Arc<CellComplex>,
        target: Arc<CellComplex>,
        assignments: &[(String, Vec<(String, BigInt)>)],
    ) -> Result<Self, ComplexError> {
        let mut images = vec![Vec::new(); source.len()];
        for (id, chain) in assignments {
            let c = source.lookup(id).ok_or_else(|| ComplexError::UnknownCell(id.clone()))?;
            let mut resolved = Vec::with_capacity(chain.len());
            for (t, v) in chain {
                let k = target.lookup(t).ok_or_else(|| ComplexError::BadImage { cell: id.clone() })?;
                resolved.push((k, v.clone()));
            }
            images[c] = resolved;
        }
        Self::from_images(source, target, images)
    }

    /// Builds a chain map from images given by cell index.
    pub fn from_images(
        source: Arc<CellComplex>,
        target: Arc<CellComplex>,
        images: Vec<Vec<(usize, BigInt)>>,
    ) -> Result<Self, ComplexError> {
        assert_eq!(images.len(), source.len(), "one image per source cell");
        let images: Vec<Chain> = images.iter().map(|c| normalize(c)).collect();
        for (c, img) in images.iter().enumerate() {
            if img.iter().any(|(t, _)| *t >= target.len() || target.dim(*t) != source.dim(c)) {
                return Err(ComplexError::BadImage { cell: source.id(c).to_string() });
            }
        }
        let f = ChainMap { source, target, images };
        if let Some(c) = f.first_noncommuting_cell() {
            return Err(ComplexError::NotAChainMap { cell: f.source.id(c).to_string() });
        }
        Ok(f)
    }

    pub fn identity(k: Arc<CellComplex>) -> Self {
        let images = (0..k.len()).map(|c| vec![(c, BigInt::one())]).collect();
        ChainMap { source: k.clone(), target: k, images }
    }

    /// Every vertex to `vertex`, every higher cell to zero.
    pub fn constant(source: Arc<CellComplex>, target: Arc<CellComplex>, vertex: &str) -> Result<Self, ComplexError> {
        let v = target.lookup(vertex).ok_or_else(|| ComplexError::UnknownCell(vertex.to_string()))?;
        let images = (0..source.len())
            .map(|c| if source.dim(c) == 0 { vec![(v, BigInt::one())] } else { vec![] })
            .collect();
        Self::from_images(source, target, images)
    }

    pub fn image(&self, cell: usize) -> &[(usize, BigInt)] {
        &self.images[cell]
    }

    fn first_noncommuting_cell(&self) -> Option<usize> {
        (0..self.source.len()).find(|&c| {
            let lhs = boundary_chain(&self.target, &self.images[c]);
            let mut rhs = Vec::new();
            for (f, v) in self.source.boundary_of(c) {
                accumulate(&mut rhs, &self.images[*f], v);
            }
            lhs != rhs
        })
    }

    /// Same source and target cells and identical images.
    pub fn same_as(&self, other: &ChainMap) -> bool {
        same_complex(&self.source, &other.source) && same_complex(&self.target, &other.target) && self.images == other.images
    }

    /// `f_n` as a matrix in the cell bases.
    pub fn matrix(&self, n: usize) -> IntMatrix {
        let mut entries = Vec::new();
        for &c in self.source.cells_in_dim(n) {
            for (t, v) in &self.images[c] {
                entries.push((self.target.position(*t), self.source.position(c), v.clone()));
            }
        }
        IntMatrix::from_triplets(self.target.count(n), self.source.count(n), entries)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap, ComplexError> {
        if !same_complex(&first.target, &self.source) {
            return Err(ComplexError::Mismatch);
        }
        let images = first
            .images
            .iter()
            .map(|img| {
                let mut acc = Vec::new();
                for (c, v) in img {
                    accumulate(&mut acc, &self.images[*c], v);
                }
                acc
            })
            .collect();
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), images })
    }

    /// Induced map `H_n(source) → H_n(target)` on canonical generators.
    pub fn induced_map(&self, n: usize) -> GroupMap {
        let hs = self.source.chain_complex().homology_basis(n);
        let ht = self.target.chain_complex().homology_basis(n);
        push_classes(&hs, &ht, &self.matrix(n))
    }

    /// Induced map on reduced homology; needs vertices sent to single vertices.
    pub fn induced_reduced_map(&self, n: usize) -> GroupMap {
        let hs = self.source.chain_complex().reduced_homology_basis(n);
        let ht = self.target.chain_complex().reduced_homology_basis(n);
        push_classes(&hs, &ht, &self.matrix(n))
    }

    /// Induced map `H^n(target) → H^n(source)`.
    pub fn induced_cohomology_map(&self, n: usize) -> GroupMap {
        let ht = self.target.chain_complex().cohomology_basis(n);
        let hs = self.source.chain_complex().cohomology_basis(n);
        push_classes(&ht, &hs, &self.matrix(n).transpose())
    }
}

fn push_classes(from: &HomologyBasis, to: &HomologyBasis, f: &IntMatrix) -> GroupMap {
    let cols: Vec<Vec<BigInt>> = from
        .representatives()
        .iter()
        .map(|r| to.class_of(&f.mul_vec(r)).expect("chain maps send cycles to cycles"))
        .collect();
    let m = IntMatrix::from_columns(&cols, to.group().generators());
    GroupMap::new(from.group().clone(), to.group().clone(), m).expect("induced maps are well defined")
}

/// Degree-raising map `H` with `∂H + H∂ = f − g` for a pair of chain maps.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub source: Arc<CellComplex>,
    pub target: Arc<CellComplex>,
    images: Vec<Chain>,
}

impl ChainHomotopy {
    pub fn from_images(
        source: Arc<CellComplex>,
        target: Arc<CellComplex>,
        images: Vec<Vec<(usize, BigInt)>>,
    ) -> Result<Self, ComplexError> {
        assert_eq!(images.len(), source.len(), "one image per source cell");
        let images: Vec<Chain> = images.iter().map(|c| normalize(c)).collect();
        for (c, img) in images.iter().enumerate() {
            if img.iter().any(|(t, _)| *t >= target.len() || target.dim(*t) != source.dim(c) + 1) {
                return Err(ComplexError::BadImage { cell: source.id(c).to_string() });
            }
        }
        Ok(ChainHomotopy { source, target, images })
    }

    /// Whether `∂H + H∂ = f − g` on every cell.
    pub fn connects(&self, f: &ChainMap, g: &ChainMap) -> bool {
        if !same_complex(&f.source, &self.source) || !same_complex(&g.source, &self.source) {
            return false;
        }
        (0..self.source.len()).all(|c| {
            let mut lhs = boundary_chain(&self.target, &self.images[c]);
            for (face, v) in self.source.boundary_of(c) {
                accumulate(&mut lhs, &self.images[*face], v);
            }
            let mut rhs = normalize(f.image(c));
            accumulate(&mut rhs, g.image(c), &-BigInt::one());
            lhs == rhs
        })
    }
}

/// Algebraic mapping cylinder of `f : S → T` with its structure maps.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: Arc<CellComplex>,
    pub source_inclusion: ChainMap,
    pub target_inclusion: ChainMap,
    /// `τ ↦ τ`, `σ ↦ f(σ)`, prisms to zero.
    pub retraction: ChainMap,
    /// Homotopy from the identity to `target_inclusion ∘ retraction`.
    pub homotopy: ChainHomotopy,
}

/// Cells `tgt:τ`, `src:σ` and `cyl:σ` with `∂ cyl:σ = f(σ) − σ − cyl:∂σ`.
pub fn mapping_cylinder(f: &ChainMap) -> Result<Cylinder, ComplexError> {
    let (s, t) = (&f.source, &f.target);
    let tgt = |k: usize| format!("tgt:{}", t.id(k));
    let src = |k: usize| format!("src:{}", s.id(k));
    let cyl = |k: usize| format!("cyl:{}", s.id(k));
    let mut cells = Vec::with_capacity(t.len() + 2 * s.len());
    for k in 0..t.len() {
        let boundary = t.boundary_of(k).iter().map(|(b, v)| (tgt(*b), v.clone())).collect();
        cells.push(Cell { id: tgt(k), dim: t.dim(k), boundary });
    }
    for k in 0..s.len() {
        let boundary = s.boundary_of(k).iter().map(|(b, v)| (src(*b), v.clone())).collect();
        cells.push(Cell { id: src(k), dim: s.dim(k), boundary });
    }
    for k in 0..s.len() {
        let mut boundary: Vec<(String, BigInt)> = f.image(k).iter().map(|(b, v)| (tgt(*b), v.clone())).collect();
        boundary.push((src(k), -BigInt::one()));
        boundary.extend(s.boundary_of(k).iter().map(|(b, v)| (cyl(*b), -v)));
        cells.push(Cell { id: cyl(k), dim: s.dim(k) + 1, boundary });
    }
    let m = Arc::new(CellComplex::new(cells)?);
    let (nt, ns) = (t.len(), s.len());
    let one = BigInt::one;
    let target_inclusion = ChainMap::from_images(t.clone(), m.clone(), (0..nt).map(|k| vec![(k, one())]).collect())?;
    let source_inclusion =
        ChainMap::from_images(s.clone(), m.clone(), (0..ns).map(|k| vec![(nt + k, one())]).collect())?;
    let mut r_images: Vec<Vec<(usize, BigInt)>> = (0..nt).map(|k| vec![(k, one())]).collect();
    r_images.extend((0..ns).map(|k| f.image(k).to_vec()));
    r_images.extend((0..ns).map(|_| vec![]));
    let retraction = ChainMap::from_images(m.clone(), t.clone(), r_images)?;
    let mut h_images: Vec<Vec<(usize, BigInt)>> = (0..nt).map(|_| vec![]).collect();
    h_images.extend((0..ns).map(|k| vec![(nt + ns + k, -one())]));
    h_images.extend((0..ns).map(|_| vec![]));
    let homotopy = ChainHomotopy::from_images(m.clone(), m.clone(), h_images)?;
    Ok(Cylinder { complex: m, source_inclusion, target_inclusion, retraction, homotopy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CanonicalGroup;
    use crate::complexes::standard::*;
    use crate::complexes::Coefficients;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn degree_two_circle_map() {
        let c = Arc::new(circle());
        let f = circle_power_map(&c, 2);
        let h1 = f.induced_map(1);
        assert_eq!(h1.matrix().get(0, 0), big(2));
        assert!(ChainMap::identity(c.clone()).induced_map(1) == GroupMap::identity(&CanonicalGroup::free(1)));
        let k = ChainMap::constant(c.clone(), c.clone(), "v").unwrap();
        assert!(k.induced_map(1).is_zero());
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let c = Arc::new(circle());
        let t = Arc::new(hollow_triangle());
        let one = || BigInt::from(1);
        let assignments = [
            ("v".to_string(), vec![("a".to_string(), one())]),
            ("e".to_string(), vec![("ab".to_string(), one())]),
        ];
        let err = ChainMap::new(c, t, &assignments).unwrap_err();
        assert!(matches!(err, ComplexError::NotAChainMap { .. }));
    }

    #[test]
    fn cylinder_of_doubling_retracts() {
        let c = Arc::new(circle());
        let f = circle_power_map(&c, 2);
        let cyl = mapping_cylinder(&f).unwrap();
        assert!(cyl.complex.validate().is_ok());
        assert_eq!(cyl.complex.len(), 6);
        assert_eq!(cyl.complex.homology(1, &Coefficients::Integers), CanonicalGroup::free(1));
        let id = ChainMap::identity(cyl.complex.clone());
        let ir = cyl.target_inclusion.compose(&cyl.retraction).unwrap();
        assert!(cyl.homotopy.connects(&id, &ir));
        assert!(cyl.retraction.compose(&cyl.target_inclusion).unwrap().induced_map(1).is_isomorphism());
    }

    #[test]
    fn cylinder_of_point_is_interval() {
        let p = Arc::new(point());
        let cyl = mapping_cylinder(&ChainMap::identity(p)).unwrap();
        assert_eq!(cyl.complex.homology(0, &Coefficients::Integers), CanonicalGroup::free(1));
        assert!(cyl.complex.homology(1, &Coefficients::Integers).is_zero());
    }
}
