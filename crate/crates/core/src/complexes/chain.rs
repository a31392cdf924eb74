use num_bigint::BigInt;

use crate::algebra::group::homology_unchecked;
use crate::algebra::{CanonicalGroup, IntMatrix, Presentation, SubLattice};
use crate::exec::{self, Strategy};

/// Coefficient ring of a (co)homology computation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Coefficients {
    #[default]
    Integers,
    /// `Z/m` with `m ≥ 2`.
    Mod(BigInt),
}

impl Coefficients {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "Z" {
            return Some(Coefficients::Integers);
        }
        let m: BigInt = s.strip_prefix("Z/")?.parse().ok()?;
        (m >= BigInt::from(2)).then_some(Coefficients::Mod(m))
    }
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

/// Free chain complex of finite rank, `d[n] : C_n → C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    d: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `d[0]` must have zero rows and `d[n].rows() == d[n-1].cols()`.
    pub fn new(d: Vec<IntMatrix>) -> Self {
        for n in 1..d.len() {
            assert_eq!(d[n].rows(), d[n - 1].cols(), "boundary {n} does not match the rank below");
        }
        if let Some(d0) = d.first() {
            assert_eq!(d0.rows(), 0, "boundary 0 must have no rows");
        }
        ChainComplex { d }
    }

    pub fn top(&self) -> usize {
        self.d.len()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.d.get(n).map_or(0, |m| m.cols())
    }

    /// `∂_n`, with the appropriate zero matrix outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        match self.d.get(n) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(if n == 0 { 0 } else { self.rank(n - 1) }, self.rank(n)),
        }
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.d
    }

    pub fn satisfies_dd_zero(&self) -> bool {
        (1..self.d.len()).all(|n| self.d[n - 1].mul(&self.d[n]).is_zero())
    }

    pub fn homology(&self, n: usize) -> CanonicalGroup {
        homology_unchecked(&self.boundary(n), &self.boundary(n + 1))
    }

    pub fn cohomology(&self, n: usize) -> CanonicalGroup {
        homology_unchecked(&self.boundary(n + 1).transpose(), &self.boundary(n).transpose())
    }

    /// Universal coefficients: `H_n ⊗ Z/m ⊕ Tor(H_{n-1}, Z/m)`.
    pub fn homology_with(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        match coeffs {
            Coefficients::Integers => self.homology(n),
            Coefficients::Mod(m) => {
                let lower = if n == 0 { CanonicalGroup::zero() } else { self.homology(n - 1) };
                self.homology(n).tensor_mod(m).direct_sum(&lower.tor_mod(m))
            }
        }
    }

    /// Universal coefficients: `Hom(H_n, Z/m) ⊕ Ext(H_{n-1}, Z/m)`.
    pub fn cohomology_with(&self, n: usize, coeffs: &Coefficients) -> CanonicalGroup {
        match coeffs {
            Coefficients::Integers => self.cohomology(n),
            Coefficients::Mod(m) => {
                let lower = if n == 0 { CanonicalGroup::zero() } else { self.homology(n - 1) };
                self.homology(n).tensor_mod(m).direct_sum(&lower.tor_mod(m))
            }
        }
    }

    /// Homology in degrees `0..top`, one degree per task.
    pub fn all_homology(&self, strategy: Strategy) -> Vec<CanonicalGroup> {
        exec::map_range(strategy, self.top(), |n| self.homology(n))
    }

    /// `H_n` with explicit cycle representatives.
    pub fn homology_basis(&self, n: usize) -> HomologyBasis {
        basis_of(n, &self.boundary(n), &self.boundary(n + 1))
    }

    /// Reduced homology: in degree zero, cycles are the kernel of the augmentation.
    pub fn reduced_homology_basis(&self, n: usize) -> HomologyBasis {
        if n > 0 {
            return self.homology_basis(n);
        }
        let c0 = self.rank(0);
        let aug = IntMatrix::from_big_rows(&[vec![BigInt::from(1); c0]], c0);
        basis_of(0, &aug, &self.boundary(1))
    }

    /// `H^n` with explicit cocycle representatives (vectors over the `n`-cells).
    pub fn cohomology_basis(&self, n: usize) -> HomologyBasis {
        basis_of(n, &self.boundary(n + 1).transpose(), &self.boundary(n).transpose())
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.top()).map(|n| if n % 2 == 0 { self.rank(n) as i64 } else { -(self.rank(n) as i64) }).sum()
    }

    /// Subquotient complex on the given basis indices per degree, which must
    /// span a quotient by a subcomplex (the complementary indices are a subcomplex).
    pub fn quotient(&self, keep: &[Vec<usize>]) -> ChainComplex {
        let d = (0..self.top())
            .map(|n| {
                let rows: Vec<usize> = if n == 0 { vec![] } else { keep[n - 1].clone() };
                self.d[n].select(&rows, &keep[n])
            })
            .collect();
        ChainComplex::new(d)
    }
}

fn basis_of(degree: usize, d_out: &IntMatrix, d_in: &IntMatrix) -> HomologyBasis {
    let cycles = if d_out.rows() == 0 { SubLattice::full(d_out.cols()) } else { SubLattice::kernel(d_out) };
    let bounds: Vec<Vec<BigInt>> = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
    let presentation = Presentation::new(cycles, &bounds).expect("boundaries are cycles in a chain complex");
    HomologyBasis { degree, presentation }
}

/// Canonical presentation of `H_n` together with cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: usize,
    presentation: Presentation,
}

impl HomologyBasis {
    pub fn group(&self) -> &CanonicalGroup {
        &self.presentation.group
    }

    /// Cycle representing each canonical generator.
    pub fn representatives(&self) -> &[Vec<BigInt>] {
        self.presentation.representatives()
    }

    /// Canonical coordinates of the class of a cycle; `None` if it is not a cycle.
    pub fn class_of(&self, cycle: &[BigInt]) -> Option<Vec<BigInt>> {
        self.presentation.coords(cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::standard::*;

    #[test]
    fn mod_two_homology_of_projective_plane() {
        let rp2 = projective_plane();
        let z2 = Coefficients::Mod(BigInt::from(2));
        assert_eq!(rp2.homology(1, &Coefficients::Integers), CanonicalGroup::cyclic(2));
        assert_eq!(rp2.homology(2, &Coefficients::Integers), CanonicalGroup::zero());
        assert_eq!(rp2.homology(1, &z2), CanonicalGroup::cyclic(2));
        assert_eq!(rp2.homology(2, &z2), CanonicalGroup::cyclic(2));
        assert_eq!(rp2.cohomology(2, &Coefficients::Integers), CanonicalGroup::cyclic(2));
        assert_eq!(rp2.cohomology(1, &Coefficients::Integers), CanonicalGroup::zero());
    }

    #[test]
    fn cycle_representatives_are_cycles() {
        let t = torus().chain_complex();
        let b = t.homology_basis(1);
        assert_eq!(b.group(), &CanonicalGroup::free(2));
        let d1 = t.boundary(1);
        for r in b.representatives() {
            assert!(d1.mul_vec(r).iter().all(|x| x == &BigInt::from(0)));
        }
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(Coefficients::parse("Z"), Some(Coefficients::Integers));
        assert_eq!(Coefficients::parse("Z/6"), Some(Coefficients::Mod(BigInt::from(6))));
        assert_eq!(Coefficients::parse("Z/1"), None);
        assert_eq!(Coefficients::parse("Q"), None);
    }
}
