use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::SubLattice;
use super::matrix::IntMatrix;
use super::snf::{diagonal_to_chain, smith_invariants};
use crate::exec::{self, Strategy};

/// Finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `2 ≤ d_1 | d_2 | … | d_k`.
///
/// Constructors canonicalize immediately, so `==` is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CanonicalGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl CanonicalGroup {
    /// Builds the group from a free rank and any list of cyclic orders.
    /// Entries equal to one are dropped and zero entries count as free summands.
    pub fn new(rank: usize, orders: Vec<BigInt>) -> Self {
        let mut rank = rank;
        let mut finite = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                rank += 1;
            } else if !d.is_one() {
                finite.push(d);
            }
        }
        let torsion = diagonal_to_chain(finite).into_iter().filter(|d| !d.is_one()).collect();
        CanonicalGroup { rank, torsion }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        CanonicalGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, vec![BigInt::from(order)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of canonical generators.
    pub fn generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of generator `k`, zero for free generators.
    pub fn modulus(&self, k: usize) -> BigInt {
        if k < self.rank {
            BigInt::zero()
        } else {
            self.torsion[k - self.rank].clone()
        }
    }

    pub fn direct_sum(&self, other: &CanonicalGroup) -> CanonicalGroup {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        Self::new(self.rank + other.rank, t)
    }

    pub fn sum_of<'a>(groups: impl IntoIterator<Item = &'a CanonicalGroup>) -> CanonicalGroup {
        groups.into_iter().fold(Self::zero(), |acc, g| acc.direct_sum(g))
    }

    /// Reduces a coordinate vector into normal form (torsion entries in `[0, d)`).
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let m = self.modulus(k);
                if m.is_zero() {
                    x.clone()
                } else {
                    x.mod_floor(&m)
                }
            })
            .collect()
    }

    /// Relation lattice generators in `Z^generators()`: `d_k e_k` per torsion generator.
    pub fn relations(&self) -> Vec<Vec<BigInt>> {
        let n = self.generators();
        (self.rank..n)
            .map(|k| {
                let mut v = vec![BigInt::zero(); n];
                v[k] = self.modulus(k);
                v
            })
            .collect()
    }

    /// `G ⊗ Z/m` in canonical form.
    pub fn tensor_mod(&self, m: &BigInt) -> CanonicalGroup {
        let mut orders = vec![m.clone(); self.rank];
        orders.extend(self.torsion.iter().map(|d| d.gcd(m)));
        Self::new(0, orders)
    }

    /// `Tor(G, Z/m)` in canonical form.
    pub fn tor_mod(&self, m: &BigInt) -> CanonicalGroup {
        Self::new(0, self.torsion.iter().map(|d| d.gcd(m)).collect())
    }
}

impl fmt::Display for CanonicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Errors of the exact-algebra layer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("d_out * d_in is nonzero")]
    CompositionNonzero,
    #[error("matrix shapes do not compose: {0}")]
    ShapeMismatch(String),
    #[error("map is not well defined on relations (generator {generator})")]
    IllDefined { generator: usize },
}

/// `ker(d_out) / im(d_in)` in canonical form.
///
/// `d_out : C_n → C_{n-1}` and `d_in : C_{n+1} → C_n`, as column-acting matrices.
pub fn homology_at(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<CanonicalGroup, AlgebraError> {
    if d_out.cols() != d_in.rows() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "d_out is {}x{}, d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    if d_out.rows() > 0 && d_in.cols() > 0 && !d_out.mul(d_in).is_zero() {
        return Err(AlgebraError::CompositionNonzero);
    }
    Ok(homology_unchecked(d_out, d_in))
}

/// Same as [`homology_at`] without the composition check.
pub(crate) fn homology_unchecked(d_out: &IntMatrix, d_in: &IntMatrix) -> CanonicalGroup {
    let n = d_out.cols();
    let out_rank = if d_out.rows() == 0 { 0 } else { smith_invariants(d_out).rank };
    let inv = if d_in.cols() == 0 { None } else { Some(smith_invariants(d_in)) };
    let in_rank = inv.as_ref().map_or(0, |i| i.rank);
    CanonicalGroup::new(n - out_rank - in_rank, inv.map_or(vec![], |i| i.torsion()))
}

/// Homology of every degree of a chain complex given by its boundary matrices,
/// `d[n] : C_n → C_{n-1}` (`d[0]` has zero rows).
pub fn homology_all(d: &[IntMatrix], strategy: Strategy) -> Vec<CanonicalGroup> {
    exec::map_range(strategy, d.len(), |n| {
        let empty;
        let d_in = match d.get(n + 1) {
            Some(m) => m,
            None => {
                empty = IntMatrix::zeros(d[n].cols(), 0);
                &empty
            }
        };
        homology_unchecked(&d[n], d_in)
    })
}

/// Homomorphism between canonical groups, as a matrix on canonical generators
/// (target generators × source generators), torsion rows reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub source: CanonicalGroup,
    pub target: CanonicalGroup,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: CanonicalGroup, target: CanonicalGroup, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}x{} matrix for a map with {} source and {} target generators",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        let rel_t = SubLattice::span(&target.relations(), target.generators());
        for k in source.rank()..source.generators() {
            let image: Vec<BigInt> = matrix.column(k).into_iter().map(|x| x * source.modulus(k)).collect();
            if !rel_t.contains(&image) {
                return Err(AlgebraError::IllDefined { generator: k });
            }
        }
        let mut m = IntMatrix::zeros(matrix.rows(), matrix.cols());
        for (i, j, v) in matrix.nonzero() {
            let md = target.modulus(i);
            let v = if md.is_zero() { v } else { v.mod_floor(&md) };
            m.set(i, j, v);
        }
        Ok(GroupMap { source, target, matrix: m })
    }

    pub fn identity(g: &CanonicalGroup) -> Self {
        GroupMap { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generators()) }
    }

    pub fn zero(source: &CanonicalGroup, target: &CanonicalGroup) -> Self {
        GroupMap {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generators(), source.generators()),
        }
    }

    /// Multiplication by an integer on `g`.
    pub fn scalar(g: &CanonicalGroup, k: i64) -> Self {
        let mut m = IntMatrix::zeros(g.generators(), g.generators());
        for i in 0..g.generators() {
            m.set(i, i, BigInt::from(k));
        }
        Self::new(g.clone(), g.clone(), m).expect("scalar maps are well defined")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupMap) -> Result<GroupMap, AlgebraError> {
        if first.target != self.source {
            return Err(AlgebraError::ShapeMismatch("composition of non-matching maps".into()));
        }
        GroupMap::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Lift of the kernel to `Z^{source generators}`.
    fn kernel_lift(&self) -> SubLattice {
        let rel = target_relation_matrix(&self.target);
        let stacked = self.matrix.hcat(&rel);
        let k = SubLattice::kernel(&stacked);
        let n = self.source.generators();
        let gens: Vec<Vec<BigInt>> = k.basis().iter().map(|v| v[..n].to_vec()).collect();
        SubLattice::span(&gens, n)
    }

    /// Lift of the image plus relations in `Z^{target generators}`.
    fn image_lift(&self) -> SubLattice {
        let n = self.target.generators();
        let mut gens: Vec<Vec<BigInt>> = (0..self.matrix.cols()).map(|j| self.matrix.column(j)).collect();
        gens.extend(self.target.relations());
        SubLattice::span(&gens, n)
    }

    pub fn is_injective(&self) -> bool {
        let rel = SubLattice::span(&self.source.relations(), self.source.generators());
        rel.contains_lattice(&self.kernel_lift())
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lift().same_as(&SubLattice::full(self.target.generators()))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

fn target_relation_matrix(g: &CanonicalGroup) -> IntMatrix {
    IntMatrix::from_columns(&g.relations(), g.generators())
}

/// Exactness of `A --f--> B --g--> C` at `B`.
pub fn is_exact_at(f: &GroupMap, g: &GroupMap) -> Result<bool, AlgebraError> {
    if f.target != g.source {
        return Err(AlgebraError::ShapeMismatch("maps do not meet at a common group".into()));
    }
    Ok(f.image_lift().same_as(&g.kernel_lift()))
}

impl fmt::Display for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: ", self.source, self.target)?;
        let rows: Vec<String> = self
            .matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_eager() {
        let a = CanonicalGroup::new(1, vec![BigInt::from(6), BigInt::from(4), BigInt::one()]);
        let b = CanonicalGroup::new(1, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Z + Z/2 + Z/12");
    }

    #[test]
    fn homology_at_examples() {
        let d_out = IntMatrix::zeros(1, 1);
        let d_in = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(homology_at(&d_out, &d_in).unwrap(), CanonicalGroup::cyclic(2));
        assert_eq!(homology_at(&IntMatrix::zeros(3, 3), &IntMatrix::zeros(3, 3)).unwrap(), CanonicalGroup::free(3));
        let bad = homology_at(&IntMatrix::from_rows(&[vec![1]]), &IntMatrix::from_rows(&[vec![1]]));
        assert_eq!(bad, Err(AlgebraError::CompositionNonzero));
    }

    #[test]
    fn torus_degree_one() {
        // one vertex, two edges, one face, every boundary zero
        let d1 = IntMatrix::zeros(1, 2);
        let d2 = IntMatrix::zeros(2, 1);
        assert_eq!(homology_at(&d1, &d2).unwrap(), CanonicalGroup::free(2));
    }

    #[test]
    fn exactness_of_short_sequence() {
        let z = CanonicalGroup::free(1);
        let z2 = CanonicalGroup::cyclic(2);
        let times2 = GroupMap::scalar(&z, 2);
        let proj = GroupMap::new(z.clone(), z2.clone(), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(is_exact_at(&times2, &proj).unwrap());
        assert!(times2.is_injective());
        assert!(!times2.is_surjective());
        assert!(proj.is_surjective());
        assert!(!proj.is_injective());
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let z2 = CanonicalGroup::cyclic(2);
        let z = CanonicalGroup::free(1);
        assert!(GroupMap::new(z2, z, IntMatrix::from_rows(&[vec![1]])).is_err());
    }
}
