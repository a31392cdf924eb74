use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Tower, TowersError};
use crate::complexes::{Cell, CellComplex, ChainMap, Subcomplex};

/// What a telescope cell is made from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TelescopeCell {
    /// Copy of cell `base` of `P_level`.
    Level { level: usize, base: usize },
    /// Prism over cell `base` of `P_{level+1}`, running from level `level+1` down to `level`.
    Prism { level: usize, base: usize },
}

impl TelescopeCell {
    /// `2i` for cells of level `i`, `2i+1` for prisms between levels `i+1` and `i`.
    pub fn stratum(&self) -> usize {
        match *self {
            TelescopeCell::Level { level, .. } => 2 * level,
            TelescopeCell::Prism { level, .. } => 2 * level + 1,
        }
    }
}

/// Mapping telescope of a tower truncated at a finite depth `n`: the levels
/// `P_0 … P_n` joined by the mapping cylinders of the bondings.
#[derive(Clone, Debug)]
pub struct Telescope {
    pub depth: usize,
    pub complex: Arc<CellComplex>,
    cells: Vec<TelescopeCell>,
    /// Collapse onto level zero: `L_i σ ↦ p_0 ⋯ p_{i-1}(σ)`, prisms to zero.
    pub collapse: ChainMap,
    level_complexes: Vec<Arc<CellComplex>>,
}

pub fn build_telescope(tower: &Tower, depth: usize) -> Result<Telescope, TowersError> {
    if let Some(available) = tower.available_levels() {
        if depth >= available {
            return Err(TowersError::DepthUnavailable { requested: depth, available });
        }
    }
    let levels: Vec<Arc<CellComplex>> = (0..=depth).map(|i| tower.level(i).expect("level exists").clone()).collect();
    let bondings: Vec<&ChainMap> = (0..depth).map(|i| tower.bonding(i).expect("bonding exists")).collect();
    let lid = |i: usize, c: usize| format!("L{i}/{}", levels[i].id(c));
    let pid = |i: usize, c: usize| format!("P{i}/{}", levels[i + 1].id(c));

    let mut cells = Vec::new();
    let mut kinds = Vec::new();
    for i in 0..=depth {
        let l = &levels[i];
        for c in 0..l.len() {
            let boundary = l.boundary_of(c).iter().map(|(f, v)| (lid(i, *f), v.clone())).collect();
            cells.push(Cell { id: lid(i, c), dim: l.dim(c), boundary });
            kinds.push(TelescopeCell::Level { level: i, base: c });
        }
        if i == depth {
            break;
        }
        let upper = &levels[i + 1];
        for c in 0..upper.len() {
            let mut boundary: Vec<(String, BigInt)> =
                bondings[i].image(c).iter().map(|(t, v)| (lid(i, *t), v.clone())).collect();
            boundary.push((lid(i + 1, c), -BigInt::one()));
            boundary.extend(upper.boundary_of(c).iter().map(|(f, v)| (pid(i, *f), -v)));
            cells.push(Cell { id: pid(i, c), dim: upper.dim(c) + 1, boundary });
            kinds.push(TelescopeCell::Prism { level: i, base: c });
        }
    }
    let complex = Arc::new(CellComplex::new(cells)?);

    // composites P_i → P_0 as chains
    let mut to_base: Vec<Vec<Vec<(usize, BigInt)>>> = vec![(0..levels[0].len()).map(|c| vec![(c, BigInt::one())]).collect()];
    for i in 0..depth {
        let prev = &to_base[i];
        let next = (0..levels[i + 1].len())
            .map(|c| {
                let mut acc: Vec<(usize, BigInt)> = Vec::new();
                for (t, v) in bondings[i].image(c) {
                    for (b, w) in &prev[*t] {
                        match acc.iter_mut().find(|(k, _)| k == b) {
                            Some((_, x)) => *x += v * w,
                            None => acc.push((*b, v * w)),
                        }
                    }
                }
                acc.retain(|(_, x)| !x.is_zero());
                acc
            })
            .collect();
        to_base.push(next);
    }
    let images = kinds
        .iter()
        .map(|k| match *k {
            TelescopeCell::Level { level, base } => to_base[level][base].clone(),
            TelescopeCell::Prism { .. } => vec![],
        })
        .collect();
    let collapse = ChainMap::from_images(complex.clone(), levels[0].clone(), images)?;
    Ok(Telescope { depth, complex, cells: kinds, collapse, level_complexes: levels })
}

impl Telescope {
    pub fn cell(&self, k: usize) -> TelescopeCell {
        self.cells[k]
    }

    pub fn cells(&self) -> &[TelescopeCell] {
        &self.cells
    }

    pub fn level_complex(&self, i: usize) -> &Arc<CellComplex> {
        &self.level_complexes[i]
    }

    /// The copy of `P_i` inside the telescope.
    pub fn level_subcomplex(&self, i: usize) -> Subcomplex {
        let mask = self.cells.iter().map(|k| matches!(k, TelescopeCell::Level { level, .. } if *level == i)).collect();
        Subcomplex::from_mask(self.complex.clone(), mask).expect("a level is closed")
    }

    /// Union of the copies of `P_0` and `P_depth`.
    pub fn ends(&self) -> Subcomplex {
        self.level_subcomplex(0).union(&self.level_subcomplex(self.depth))
    }

    /// Telescope cells lying over the given level-wise cell sets: `L_i σ` for
    /// `σ ∈ Q_i` and prisms over `σ ∈ Q_{i+1}`. `None` when the result is not closed.
    pub fn over(&self, levels: &[Vec<bool>]) -> Option<Subcomplex> {
        let mask = self
            .cells
            .iter()
            .map(|k| match *k {
                TelescopeCell::Level { level, base } => levels[level][base],
                TelescopeCell::Prism { level, base } => levels[level + 1][base],
            })
            .collect();
        Subcomplex::from_mask(self.complex.clone(), mask).ok()
    }
}
