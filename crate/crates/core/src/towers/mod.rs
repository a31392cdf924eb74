//! Inverse towers of finite cell complexes, their algebraic mapping
//! telescopes, and restrictions (level-wise subcomplexes) of towers.

mod restriction;
mod telescope;

use std::sync::Arc;

use num_traits::One;

pub use restriction::{
    classify_restriction, kappa_double_prime, telescope_duality_check, Classification, DualityReport, FamilyKind,
    FiltrationFamily, LevelSet, Restriction, Thread, Verdict,
};
pub use telescope::{build_telescope, Telescope, TelescopeCell};

use crate::algebra::{Direction, GroupMap, GroupTower, TailPolicy, TowerError};
use crate::complexes::{coefficient_cone, cone_map, CellComplex, ChainMap, Coefficients, ComplexError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TowersError {
    #[error("tower needs {needed} stored levels, has {have}")]
    TooShort { needed: usize, have: usize },
    #[error("bonding {index} does not map level {} to level {index}", index + 1)]
    BadBonding { index: usize },
    #[error("bonding {index} sends cell {cell} to something other than a single vertex or a cell with faces")]
    NotCellular { index: usize, cell: String },
    #[error("tail policy is contradicted at stored index {index}")]
    TailMismatch { index: usize },
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("depth {requested} unavailable: only {available} levels are known")]
    DepthUnavailable { requested: usize, available: usize },
    #[error("tail policy does not allow deciding this question")]
    UndecidableTail,
    #[error("restriction is invalid: {0}")]
    InvalidRestriction(String),
    #[error("compact description is invalid: {0}")]
    InvalidCompactSpec(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// `… → P_2 → P_1 → P_0` with `bondings[i] : P_{i+1} → P_i`.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<Arc<CellComplex>>,
    bondings: Vec<ChainMap>,
    tail: TailPolicy,
    tail_identity: Option<ChainMap>,
}

impl Tower {
    pub fn new(levels: Vec<Arc<CellComplex>>, bondings: Vec<ChainMap>, tail: TailPolicy) -> Result<Self, TowersError> {
        if let TailPolicy::EventuallyPeriodic { period: 0, .. } = tail {
            return Err(TowersError::ZeroPeriod);
        }
        let needed = tail.required_levels().max(1);
        if levels.len() < needed {
            return Err(TowersError::TooShort { needed, have: levels.len() });
        }
        if bondings.len() + 1 != levels.len() {
            return Err(TowersError::TooShort { needed: levels.len() - 1, have: bondings.len() });
        }
        for (i, b) in bondings.iter().enumerate() {
            if !b.source.same_cells(&levels[i + 1]) || !b.target.same_cells(&levels[i]) {
                return Err(TowersError::BadBonding { index: i });
            }
            check_cellular(i, b)?;
        }
        for (i, l) in levels.iter().enumerate() {
            let report = l.validate();
            if !report.is_ok() {
                return Err(ComplexError::Invalid(report).into());
            }
            for c in 0..l.len() {
                if l.dim(c) > 0 && l.faces(c).is_empty() {
                    return Err(TowersError::NotCellular { index: i, cell: l.id(c).to_string() });
                }
            }
        }
        let mut tail_identity = None;
        match tail {
            TailPolicy::TruncatedUnknown => {}
            TailPolicy::EventuallyConstant { from } => {
                for i in from..levels.len() {
                    if !levels[i].same_cells(&levels[from]) {
                        return Err(TowersError::TailMismatch { index: i });
                    }
                }
                let id = ChainMap::identity(levels[from].clone());
                for (i, b) in bondings.iter().enumerate().skip(from) {
                    if !b.same_as(&id) {
                        return Err(TowersError::TailMismatch { index: i });
                    }
                }
                tail_identity = Some(id);
            }
            TailPolicy::EventuallyPeriodic { from, period } => {
                for i in from..levels.len() {
                    if i + period < levels.len() && !levels[i + period].same_cells(&levels[i]) {
                        return Err(TowersError::TailMismatch { index: i + period });
                    }
                    if i + period < bondings.len() && !bondings[i + period].same_as(&bondings[i]) {
                        return Err(TowersError::TailMismatch { index: i + period });
                    }
                }
            }
        }
        Ok(Tower { levels, bondings, tail, tail_identity })
    }

    /// Constant tower of `k` with identity bondings.
    pub fn constant(k: CellComplex) -> Self {
        Tower::try_constant(k).expect("constant tower")
    }

    /// [`Tower::constant`] for complexes not known to be valid tower levels.
    pub fn try_constant(k: CellComplex) -> Result<Self, TowersError> {
        let k = Arc::new(k);
        let id = ChainMap::identity(k.clone());
        Tower::new(vec![k.clone(), k], vec![id], TailPolicy::EventuallyConstant { from: 0 })
    }

    /// Tower repeating one self-map `f` of a complex from level zero on.
    pub fn periodic(f: ChainMap) -> Result<Self, TowersError> {
        let k = f.source.clone();
        Tower::new(vec![k.clone(), k], vec![f], TailPolicy::EventuallyPeriodic { from: 0, period: 1 })
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    pub fn stored_levels(&self) -> &[Arc<CellComplex>] {
        &self.levels
    }

    pub fn stored_bondings(&self) -> &[ChainMap] {
        &self.bondings
    }

    /// Number of levels that exist: unbounded unless the tail is unknown.
    pub fn available_levels(&self) -> Option<usize> {
        match self.tail {
            TailPolicy::TruncatedUnknown => Some(self.levels.len()),
            _ => None,
        }
    }

    /// Stored index whose complex and outgoing bonding level `k` repeats.
    pub fn fold(&self, k: usize) -> usize {
        self.tail.fold(k)
    }

    pub fn level(&self, k: usize) -> Option<&Arc<CellComplex>> {
        if k < self.levels.len() {
            return Some(&self.levels[k]);
        }
        match self.tail {
            TailPolicy::TruncatedUnknown => None,
            _ => Some(&self.levels[self.fold(k)]),
        }
    }

    /// `p_k : P_{k+1} → P_k`.
    pub fn bonding(&self, k: usize) -> Option<&ChainMap> {
        if k < self.bondings.len() {
            return Some(&self.bondings[k]);
        }
        match self.tail {
            TailPolicy::TruncatedUnknown => None,
            TailPolicy::EventuallyConstant { .. } => self.tail_identity.as_ref(),
            TailPolicy::EventuallyPeriodic { .. } => Some(&self.bondings[self.fold(k)]),
        }
    }

    /// Whether every bonding is an identity map.
    pub fn all_identities(&self) -> bool {
        matches!(self.tail, TailPolicy::EventuallyConstant { from: 0 })
    }

    /// Index from which levels are stable under an eventually constant tail.
    pub fn stable_from(&self) -> Option<usize> {
        match self.tail {
            TailPolicy::EventuallyConstant { from } => Some(from),
            _ => None,
        }
    }

    fn group_tower(&self, n: usize, mode: Mode) -> Result<GroupTower, TowersError> {
        let count = self.levels.len();
        let bases: Vec<_> = self
            .levels
            .iter()
            .map(|l| {
                let cc = l.chain_complex();
                match mode {
                    Mode::Homology => cc.homology_basis(n),
                    Mode::Reduced => cc.reduced_homology_basis(n),
                    Mode::Cohomology => cc.cohomology_basis(n),
                }
                .group()
                .clone()
            })
            .collect();
        let maps: Vec<GroupMap> = (0..count - 1)
            .map(|i| {
                let b = &self.bondings[i];
                match mode {
                    Mode::Homology => b.induced_map(n),
                    Mode::Reduced => b.induced_reduced_map(n),
                    Mode::Cohomology => b.induced_cohomology_map(n),
                }
            })
            .collect();
        let direction = if mode == Mode::Cohomology { Direction::Direct } else { Direction::Inverse };
        Ok(GroupTower::new(bases, maps, self.tail, direction)?)
    }

    /// `H_n(P_0) ← H_n(P_1) ← …`.
    pub fn homology_tower(&self, n: usize) -> Result<GroupTower, TowersError> {
        self.group_tower(n, Mode::Homology)
    }

    /// Reduced homology tower (differs from [`Tower::homology_tower`] only in degree zero).
    pub fn reduced_homology_tower(&self, n: usize) -> Result<GroupTower, TowersError> {
        self.group_tower(n, Mode::Reduced)
    }

    /// `H^n(P_0) → H^n(P_1) → …` along the dual bondings.
    pub fn cohomology_tower(&self, n: usize) -> Result<GroupTower, TowersError> {
        self.group_tower(n, Mode::Cohomology)
    }

    /// The same tower with every level replaced by its [`coefficient_cone`], so
    /// that integral (co)homology of the result is (co)homology with `coeffs`
    /// (cohomology shifted up by one degree).
    pub fn with_coefficients(&self, coeffs: &Coefficients) -> Result<Tower, TowersError> {
        let m = match coeffs {
            Coefficients::Integers => return Ok(self.clone()),
            Coefficients::Mod(m) => m,
        };
        let levels: Vec<Arc<CellComplex>> = self.levels.iter().map(|l| Arc::new(coefficient_cone(l, m))).collect();
        let bondings = self
            .bondings
            .iter()
            .enumerate()
            .map(|(i, b)| cone_map(b, levels[i + 1].clone(), levels[i].clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Tower::new(levels, bondings, self.tail)
    }

    /// Largest cell dimension over the stored levels.
    pub fn dimension(&self) -> usize {
        self.levels.iter().filter_map(|l| l.dimension()).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Homology,
    Reduced,
    Cohomology,
}

/// Vertices must go to a single vertex with coefficient one.
fn check_cellular(index: usize, b: &ChainMap) -> Result<(), TowersError> {
    for &v in b.source.cells_in_dim(0) {
        let img = b.image(v);
        if img.len() != 1 || !img[0].1.is_one() {
            return Err(TowersError::NotCellular { index, cell: b.source.id(v).to_string() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tower_colim, tower_lim, tower_lim1, CanonicalGroup};
    use crate::complexes::standard::*;

    #[test]
    fn solenoid_towers() {
        let c = Arc::new(circle());
        let t = Tower::periodic(circle_power_map(&c, 2)).unwrap();
        let h1 = t.homology_tower(1).unwrap();
        assert!(tower_lim(&h1).unwrap().is_zero());
        assert!(!tower_lim1(&h1).unwrap().is_zero());
        let c1 = t.cohomology_tower(1).unwrap();
        assert_eq!(tower_colim(&c1, true).unwrap().group.to_string(), "Z[1/2]");
        let r0 = t.reduced_homology_tower(0).unwrap();
        assert_eq!(tower_lim(&r0).unwrap(), crate::algebra::GroupResult::Exact(CanonicalGroup::zero()));
    }

    #[test]
    fn synthesized_levels() {
        let t = Tower::constant(torus());
        assert!(t.level(17).unwrap().same_cells(&torus()));
        assert!(t.bonding(40).is_some());
        assert!(t.all_identities());
    }

    #[test]
    fn mismatched_periodic_block_is_rejected() {
        let c = Arc::new(circle());
        let f2 = circle_power_map(&c, 2);
        let f3 = circle_power_map(&c, 3);
        let r = Tower::new(vec![c.clone(), c.clone(), c.clone()], vec![f2, f3], TailPolicy::EventuallyPeriodic { from: 0, period: 1 });
        assert!(matches!(r, Err(TowersError::TailMismatch { .. })));
    }
}
