use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::SteenrodError;
use crate::algebra::{CanonicalGroup, IntMatrix, TailPolicy};
use crate::complexes::ChainComplex;
use crate::ideals::{in_ideal, meets_every_member_finitely, Family, IdealKind, IndexIdeal, SemilinearSet, StepFunction};
use crate::kdirect::PatternElement;
use crate::towers::{build_telescope, Telescope, TelescopeCell, Tower};

/// How infinite (co)chains on the telescope are allowed to be supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMode {
    /// Colimit over restrictions with finite levels of products: support
    /// finite in each row.
    KappaChains,
    /// Limit over restrictions with empty inverse limit of sums: support
    /// meets every eventually empty restriction finitely.
    NuChains,
    /// Limit over restrictions with finite levels of sums: support meets
    /// every row-finite region finitely.
    KappaCochains,
    /// Colimit over restrictions with empty inverse limit of products:
    /// support inside an eventually empty restriction.
    NuCochains,
}

impl ChainMode {
    pub const ALL: [ChainMode; 4] =
        [ChainMode::KappaChains, ChainMode::NuChains, ChainMode::KappaCochains, ChainMode::NuCochains];

    pub fn is_cochain(self) -> bool {
        matches!(self, ChainMode::KappaCochains | ChainMode::NuCochains)
    }
}

/// Degree-`n` generators of the infinite telescope laid out on `ℕ²`: row `j`
/// holds the generators over level `j-1`, first the `n`-cells of `P_{j-1}`,
/// then the prisms over the `(n-1)`-cells of `P_j`.
#[derive(Clone, Debug)]
pub struct ChainGroup {
    pub mode: ChainMode,
    pub degree: usize,
    counts: StepFunction,
    /// `(n-cells of P_ℓ, (n-1)-cells of P_{ℓ+1})` per stored row.
    split: Vec<(usize, usize)>,
    tower: Tower,
}

/// Generators of row `ℓ+1`; `None` when the level is not known.
fn row_split(tower: &Tower, n: usize, level: usize) -> Option<(usize, usize)> {
    let here = tower.level(level)?.count(n);
    let prisms = match (n, tower.level(level + 1)) {
        (0, _) => 0,
        (_, Some(next)) => next.count(n - 1),
        (_, None) => 0,
    };
    Some((here, prisms))
}

pub fn chain_group(tower: &Tower, n: usize, mode: ChainMode) -> Result<ChainGroup, SteenrodError> {
    let rows = match tower.tail().block() {
        Some((from, period)) => from + period + 1,
        None => tower.available_levels().unwrap_or(0),
    };
    let split: Vec<(usize, usize)> = (0..rows).map(|l| row_split(tower, n, l).expect("stored level")).collect();
    let table: Vec<u64> = split.iter().map(|(a, b)| (a + b) as u64).collect();
    let counts = match tower.tail().block() {
        Some((from, period)) => {
            let tail: Vec<u64> = table[from..].to_vec();
            if tail.iter().any(|&c| c != tail[0]) {
                return Err(SteenrodError::Unsupported(format!(
                    "degree {n} generator counts vary with period {period}"
                )));
            }
            StepFunction::new(table[..from].to_vec(), 0, tail[0]).normalized()
        }
        None => StepFunction::new(table, 0, 0),
    };
    Ok(ChainGroup { mode, degree: n, counts, split, tower: tower.clone() })
}

impl ChainGroup {
    /// Number of generators in row `j` (`j ≥ 1`).
    pub fn row_size(&self, j: u64) -> u64 {
        self.counts.eval(j)
    }

    /// Positions carrying a generator.
    pub fn region(&self) -> SemilinearSet {
        SemilinearSet::under_rows(self.counts.clone())
    }

    fn split_at(&self, j: u64) -> (usize, usize) {
        let l = (j - 1) as usize;
        match self.split.get(l) {
            Some(s) => *s,
            None => row_split(&self.tower, self.degree, l).unwrap_or((0, 0)),
        }
    }

    /// The telescope cell at position `(i, j)`, if there is one.
    pub fn generator(&self, i: u64, j: u64) -> Option<TelescopeCell> {
        if i == 0 || j == 0 || i > self.row_size(j) {
            return None;
        }
        let level = (j - 1) as usize;
        let (here, _) = self.split_at(j);
        let i = (i - 1) as usize;
        Some(if i < here {
            let base = self.tower.level(level)?.cells_in_dim(self.degree)[i];
            TelescopeCell::Level { level, base }
        } else {
            let base = self.tower.level(level + 1)?.cells_in_dim(self.degree - 1)[i - here];
            TelescopeCell::Prism { level, base }
        })
    }

    /// Whether the pattern is a (co)chain of this kind: integer valued,
    /// supported on generators, and with support in the ideal of the mode.
    pub fn contains(&self, x: &PatternElement) -> Result<bool, SteenrodError> {
        if *x.group() != CanonicalGroup::free(1) {
            return Ok(false);
        }
        let s = x.support();
        if !s.is_subset_of(&self.region())? {
            return Ok(false);
        }
        let under = |kind| IndexIdeal::new(kind, Family::UnderRows);
        let first = |kind| IndexIdeal::new(kind, Family::FirstRows);
        Ok(match self.mode {
            ChainMode::KappaChains => in_ideal(&s, &under(IdealKind::KappaType))?.member,
            ChainMode::NuChains => meets_every_member_finitely(&s, &first(IdealKind::NubarType))?.0,
            ChainMode::KappaCochains => meets_every_member_finitely(&s, &under(IdealKind::KappaType))?.0,
            ChainMode::NuCochains => in_ideal(&s, &first(IdealKind::NubarType))?.member,
        })
    }

    /// Coefficients of `x` on the degree-`n` cells of the telescope of depth
    /// `depth`, in the telescope's own order of those cells.
    pub fn truncate(&self, x: &PatternElement, tel: &Telescope) -> Vec<BigInt> {
        let cx = &tel.complex;
        let mut out = vec![BigInt::zero(); cx.count(self.degree)];
        for j in 1..=(tel.depth as u64 + 1) {
            for i in 1..=self.row_size(j) {
                let Some(cell) = self.generator(i, j) else { continue };
                if let TelescopeCell::Prism { level, .. } = cell {
                    if level >= tel.depth {
                        continue;
                    }
                }
                let v = x.value_at(i, j);
                if v.is_empty() || v[0].is_zero() {
                    continue;
                }
                if let Some(k) = tel.cells().iter().position(|c| *c == cell) {
                    out[cx.position(k)] = v[0].clone();
                }
            }
        }
        out
    }
}

/// The telescope chain complex truncated at a finite depth, read as chains
/// or as cochains according to the mode.
#[derive(Clone, Debug)]
pub struct FiltrationChainComplex {
    pub mode: ChainMode,
    pub telescope: Telescope,
}

impl FiltrationChainComplex {
    pub fn new(tower: &Tower, depth: usize, mode: ChainMode) -> Result<Self, SteenrodError> {
        if matches!(tower.tail(), TailPolicy::TruncatedUnknown) && tower.available_levels().is_some_and(|a| depth >= a) {
            return Err(SteenrodError::UndeterminedTail);
        }
        Ok(FiltrationChainComplex { mode, telescope: build_telescope(tower, depth)? })
    }

    pub fn chain_complex(&self) -> ChainComplex {
        self.telescope.complex.chain_complex()
    }

    /// `∂_n : C_n → C_{n-1}` for chains, `δ^n : C^n → C^{n+1}` for cochains.
    pub fn differential(&self, n: usize) -> IntMatrix {
        let k = &self.telescope.complex;
        if self.mode.is_cochain() {
            k.boundary_matrix(n + 1).transpose()
        } else {
            k.boundary_matrix(n)
        }
    }

    pub fn rank(&self, n: usize) -> usize {
        self.telescope.complex.count(n)
    }

    /// Composite of consecutive differentials vanishes in every degree.
    pub fn satisfies_dd_zero(&self) -> bool {
        let top = self.telescope.complex.dim_count();
        (0..=top).all(|n| {
            let (a, b) = if self.mode.is_cochain() {
                (self.differential(n + 1), self.differential(n))
            } else if n == 0 {
                return true;
            } else {
                (self.differential(n - 1), self.differential(n))
            };
            a.rows() == 0 || b.cols() == 0 || a.mul(&b).is_zero()
        })
    }

    /// Homology for chain modes, cohomology for cochain modes.
    pub fn homology(&self, n: usize) -> CanonicalGroup {
        let cc = self.chain_complex();
        if self.mode.is_cochain() {
            cc.cohomology(n)
        } else {
            cc.homology(n)
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complexes::standard::*;
    use crate::ideals::{random_set, AxisSet, Coord};

    #[test]
    fn point_tower_has_one_generator_per_level() {
        let t = Tower::constant(point());
        for mode in ChainMode::ALL {
            let g = chain_group(&t, 0, mode).unwrap();
            assert!((1..20).all(|j| g.row_size(j) == 1));
            assert_eq!(g.generator(1, 4), Some(TelescopeCell::Level { level: 3, base: 0 }));
            assert_eq!(g.generator(2, 4), None);
        }
        let g1 = chain_group(&t, 1, ChainMode::KappaChains).unwrap();
        assert_eq!(g1.generator(1, 1), Some(TelescopeCell::Prism { level: 0, base: 0 }));
    }

    #[test]
    fn depth_zero_is_the_cellular_complex() {
        for k in [circle(), torus(), projective_plane()] {
            let cc = k.chain_complex();
            let t = Tower::constant(k);
            for mode in ChainMode::ALL {
                let f = FiltrationChainComplex::new(&t, 0, mode).unwrap();
                assert_eq!(f.chain_complex(), cc);
                assert!(f.satisfies_dd_zero());
                for n in 0..3 {
                    let expect = if mode.is_cochain() { cc.cohomology(n) } else { cc.homology(n) };
                    assert_eq!(f.homology(n), expect);
                }
            }
        }
    }

    #[test]
    fn chain_modes_agree_and_cochains_are_row_bounded() {
        let s = Arc::new(circle());
        let t = Tower::periodic(circle_power_map(&s, 3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = CanonicalGroup::free(1);
        for n in 0..2 {
            let groups: Vec<ChainGroup> = ChainMode::ALL.iter().map(|&m| chain_group(&t, n, m).unwrap()).collect();
            let region = groups[0].region();
            for _ in 0..40 {
                let support = random_set(&mut rng, Coord::J).intersect(&region);
                let x = PatternElement::constant(z.clone(), support.clone(), &[1]).unwrap();
                let m: Vec<bool> = groups.iter().map(|g| g.contains(&x).unwrap()).collect();
                assert!(m[0] && m[1]);
                assert_eq!(m[2], m[3]);
                assert_eq!(m[2], support.last_row().unwrap().is_some());
            }
        }
        // a full column of generators is a chain but not a cochain
        let g = chain_group(&t, 0, ChainMode::KappaCochains).unwrap();
        let col = SemilinearSet::rect(AxisSet::up_to(1), AxisSet::all());
        let x = PatternElement::constant(z.clone(), col, &[1]).unwrap();
        assert!(!g.contains(&x).unwrap());
        assert!(chain_group(&t, 0, ChainMode::NuChains).unwrap().contains(&x).unwrap());
        // outside the generators
        let off = PatternElement::constant(z, SemilinearSet::points([(5, 1)]), &[1]).unwrap();
        assert!(!g.contains(&off).unwrap());
    }

    #[test]
    fn truncation_places_coefficients() {
        let t = Tower::constant(point());
        let g = chain_group(&t, 0, ChainMode::KappaChains).unwrap();
        let tel = build_telescope(&t, 2).unwrap();
        let x = PatternElement::constant(CanonicalGroup::free(1), SemilinearSet::first_rows(2), &[4]).unwrap();
        let v = g.truncate(&x, &tel);
        assert_eq!(v.iter().filter(|c| **c == BigInt::from(4)).count(), 2);
        assert_eq!(v.len(), 3);
    }
}
