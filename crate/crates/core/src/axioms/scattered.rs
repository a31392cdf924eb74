use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{is_iso_onto, kept_cells, relative_matrix};
use crate::algebra::{CanonicalGroup, IntMatrix};
use crate::complexes::{Cell, CellComplex, Coefficients, Pair, Subcomplex};
use crate::ideals::{duality_check, random_set, AxisSet, PairedIdeals, SemilinearSet};
use crate::kdirect::{chi_check, PatternElement};
use crate::steenrod::SteenrodError;

/// How the components of a scattered instance accumulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attachment {
    /// All components share one basepoint: a shrinking wedge over `X = pt`.
    Cluster,
    /// Nothing accumulates: `X = ∅`.
    DisjointUnion,
    /// Components `(i, j)` share a basepoint per row `j`.
    Horizontal,
    /// Components `(i, j)` share a basepoint per column `i`.
    Vertical,
}

/// Countably many copies `C_i` of one finite complex, indexed by a subset of
/// `ℕ²`, attached to a closed set `X` of basepoints, with the paired ideals
/// describing which families of components have compact closure.
#[derive(Clone, Debug)]
pub struct ScatteredInstance {
    pub name: String,
    pub component: Arc<CellComplex>,
    /// Vertex of the component glued to `X` (unused for disjoint unions).
    pub basepoint: usize,
    pub attachment: Attachment,
    pub ideals: PairedIdeals,
    /// Number of components in the truncation.
    pub size: usize,
}

/// Finite stage `C̄_K` with its copies of the component.
struct Assembly {
    pair: Pair,
    /// `copy k ↦ (component cell ↦ cell of the assembly)`.
    copies: Vec<Vec<usize>>,
    /// `cell of the assembly ↦ (copy, component cell)`.
    owner: HashMap<usize, (usize, usize)>,
}

impl ScatteredInstance {
    pub fn new(
        name: impl Into<String>,
        component: Arc<CellComplex>,
        basepoint: &str,
        attachment: Attachment,
        size: usize,
    ) -> Result<Self, String> {
        let b = component.lookup(basepoint).ok_or_else(|| format!("no vertex {basepoint}"))?;
        if component.dim(b) != 0 {
            return Err(format!("{basepoint} is not a vertex"));
        }
        let ideals = match attachment {
            Attachment::Cluster | Attachment::DisjointUnion => PairedIdeals::clustered(),
            Attachment::Horizontal => PairedIdeals::horizontal(),
            Attachment::Vertical => PairedIdeals::vertical(),
        };
        Ok(ScatteredInstance { name: name.into(), component, basepoint: b, attachment, ideals, size })
    }

    /// Index set of the components.
    pub fn universe(&self) -> SemilinearSet {
        match self.attachment {
            Attachment::Cluster | Attachment::DisjointUnion => SemilinearSet::rect(AxisSet::all(), AxisSet::up_to(1)),
            Attachment::Horizontal | Attachment::Vertical => SemilinearSet::full(),
        }
    }

    /// The indices of the truncation: the first `size` points of row one, or
    /// of a square grid filled row by row.
    pub fn window(&self) -> Vec<(u64, u64)> {
        let n = self.size as u64;
        match self.attachment {
            Attachment::Cluster | Attachment::DisjointUnion => (1..=n).map(|i| (i, 1)).collect(),
            _ => {
                let side = (1..).find(|s: &u64| s * s >= n).unwrap_or(1);
                (0..n).map(|k| (k % side + 1, k / side + 1)).collect()
            }
        }
    }

    fn anchor(&self, (i, j): (u64, u64)) -> Option<String> {
        match self.attachment {
            Attachment::Cluster => Some("x".into()),
            Attachment::DisjointUnion => None,
            Attachment::Horizontal => Some(format!("x_row{j}")),
            Attachment::Vertical => Some(format!("x_col{i}")),
        }
    }

    /// `(C, {basepoint})`, or `(C, ∅)` for disjoint unions.
    pub fn component_pair(&self) -> Pair {
        let c = self.component.clone();
        let sub = match self.attachment {
            Attachment::DisjointUnion => Subcomplex::empty(c.clone()),
            _ => Subcomplex::closure(c.clone(), [self.basepoint]),
        };
        Pair::new(c, sub).expect("same parent")
    }

    fn assemble(&self, indices: &[(u64, u64)]) -> Assembly {
        let c = &self.component;
        let mut cells = Vec::new();
        let mut anchors = BTreeSet::new();
        for &ix in indices {
            if let Some(a) = self.anchor(ix) {
                if anchors.insert(a.clone()) {
                    cells.push(Cell::vertex(a));
                }
            }
        }
        let name = |ix: (u64, u64), k: usize| -> String {
            match self.anchor(ix) {
                Some(a) if k == self.basepoint => a,
                _ => format!("{},{}:{}", ix.0, ix.1, c.id(k)),
            }
        };
        for &ix in indices {
            for k in 0..c.len() {
                if self.anchor(ix).is_some() && k == self.basepoint {
                    continue;
                }
                let boundary = c.boundary_of(k).iter().map(|(f, v)| (name(ix, *f), v.clone())).collect();
                cells.push(Cell { id: name(ix, k), dim: c.dim(k), boundary });
            }
        }
        let w = Arc::new(CellComplex::new(cells).expect("assembly ids are distinct"));
        let copies: Vec<Vec<usize>> =
            indices.iter().map(|&ix| (0..c.len()).map(|k| w.lookup(&name(ix, k)).expect("assembled")).collect()).collect();
        let mut owner = HashMap::new();
        for (t, map) in copies.iter().enumerate() {
            for (k, &cell) in map.iter().enumerate() {
                if !anchors.contains(w.id(cell)) {
                    owner.insert(cell, (t, k));
                }
            }
        }
        let anchor_ids: Vec<String> = anchors.into_iter().collect();
        let sub = Subcomplex::new(w.clone(), &anchor_ids).expect("anchors are vertices");
        Assembly { pair: Pair::new(w, sub).expect("same parent"), copies, owner }
    }
}

/// One finite stage `C̄_K` of a controlled additivity check.
#[derive(Clone, Debug)]
pub struct KSample {
    pub components: usize,
    /// `H_n(C̄_K, X_K)`.
    pub relative: CanonicalGroup,
    /// `∏_{i∈K} H_n(C_i, x_i)`.
    pub product: CanonicalGroup,
    /// The retractions onto the components assemble to an isomorphism.
    pub phi_iso: bool,
    /// The restrictions to the components assemble to an isomorphism in cohomology.
    pub psi_iso: bool,
}

#[derive(Clone, Debug)]
pub struct AdditivityReport {
    pub instance: String,
    pub degree: usize,
    pub samples: Vec<KSample>,
    pub patterns: usize,
    pub pattern_failures: usize,
    /// The instance's ideals passed the duality check on random sets.
    pub ideals_dual: bool,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.ideals_dual && self.pattern_failures == 0 && self.samples.iter().all(|s| s.phi_iso && s.psi_iso)
    }
}

fn moduli(g: &CanonicalGroup) -> Vec<BigInt> {
    (0..g.generators()).map(|k| g.modulus(k)).collect()
}

fn phi_matrix(a: &Assembly, comp: &Pair, n: usize) -> Result<IntMatrix, SteenrodError> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for t in 0..a.copies.len() {
        let m = relative_matrix(&a.pair, comp, n, |cell| match a.owner.get(&cell) {
            Some(&(owner, k)) if owner == t => vec![(k, BigInt::one())],
            _ => vec![],
        })?;
        rows.extend(m.to_rows());
    }
    let cols = a.pair.relative_homology(n, &Coefficients::Integers).generators();
    Ok(IntMatrix::from_big_rows(&rows, cols))
}

/// Restriction of relative cocycles of the assembly to each copy.
fn psi_matrix(a: &Assembly, comp: &Pair, n: usize) -> Result<(CanonicalGroup, IntMatrix), SteenrodError> {
    let hw = a.pair.relative_chain_complex().cohomology_basis(n);
    let hc = comp.relative_chain_complex().cohomology_basis(n);
    let w_cells = kept_cells(&a.pair, n);
    let c_cells = kept_cells(comp, n);
    let slot: HashMap<usize, usize> = w_cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for copy in &a.copies {
        let mut cols = Vec::new();
        for phi in hw.representatives() {
            let restricted: Vec<BigInt> =
                c_cells.iter().map(|&k| slot.get(&copy[k]).map_or_else(BigInt::zero, |&s| phi[s].clone())).collect();
            let class = hc
                .class_of(&restricted)
                .ok_or_else(|| SteenrodError::Unsupported("restriction of a relative cocycle is not a cocycle".into()))?;
            cols.push(class);
        }
        rows.extend(IntMatrix::from_columns(&cols, hc.group().generators()).to_rows());
    }
    Ok((hw.group().clone(), IntMatrix::from_big_rows(&rows, hw.group().generators())))
}

fn random_value<R: Rng>(rng: &mut R, g: &CanonicalGroup) -> Vec<BigInt> {
    (0..g.generators()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()
}

/// Checks controlled additivity in degree `n` on the instance: finite stages
/// against finite products in homology and cohomology, and the assembled
/// group against the K-direct-sum predicate on random pattern elements.
pub fn check_controlled_additivity<R: Rng>(
    s: &ScatteredInstance,
    n: usize,
    rng: &mut R,
    stages: usize,
    patterns: usize,
) -> Result<AdditivityReport, SteenrodError> {
    let window = s.window();
    let comp = s.component_pair();
    let z = Coefficients::Integers;
    let factor = comp.relative_homology(n, &z);
    let cofactor = comp.relative_cohomology(n, &z);

    let mut stage_sets: Vec<Vec<(u64, u64)>> = vec![window.clone()];
    for g in s.ideals.kappa.sample_generators(rng, stages) {
        let k: Vec<(u64, u64)> = window.iter().copied().filter(|&(i, j)| g.contains(i, j) && rng.gen_bool(0.8)).collect();
        stage_sets.push(k);
    }

    let samples = stage_sets
        .iter()
        .map(|k| {
            let a = s.assemble(k);
            let relative = a.pair.relative_homology(n, &z);
            let product = CanonicalGroup::sum_of(std::iter::repeat_n(&factor, k.len()));
            let phi = phi_matrix(&a, &comp, n)?;
            let target: Vec<BigInt> = (0..k.len()).flat_map(|_| moduli(&factor)).collect();
            let phi_iso = is_iso_onto(&relative, &phi, &target);
            let (co, psi) = psi_matrix(&a, &comp, n)?;
            let cotarget: Vec<BigInt> = (0..k.len()).flat_map(|_| moduli(&cofactor)).collect();
            let psi_iso = is_iso_onto(&co, &psi, &cotarget);
            Ok(KSample { components: k.len(), relative, product, phi_iso, psi_iso })
        })
        .collect::<Result<Vec<_>, SteenrodError>>()?;

    let universe = s.universe();
    let orientation = s.ideals.orientation();
    let mut pattern_failures = 0;
    for _ in 0..patterns {
        let first = random_set(rng, orientation).intersect(&universe);
        let second = random_set(rng, orientation).intersect(&universe).difference(&first);
        let pieces = vec![(first, random_value(rng, &factor)), (second, random_value(rng, &factor))];
        let g = PatternElement::new(factor.clone(), pieces)?;
        if !chi_check(&g, &s.ideals)?.agrees() {
            pattern_failures += 1;
        }
    }

    let mut ideals_dual = true;
    for _ in 0..4 {
        let set = random_set(rng, orientation);
        ideals_dual &= duality_check(&set, &s.ideals, 4, rng)?.passed();
    }
    Ok(AdditivityReport {
        instance: s.name.clone(),
        degree: n,
        samples,
        patterns,
        pattern_failures,
        ideals_dual,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complexes::standard::*;

    fn check(attachment: Attachment, component: CellComplex, size: usize) -> Vec<AdditivityReport> {
        let c = Arc::new(component);
        let s = ScatteredInstance::new("test", c.clone(), c.id(0), attachment, size).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        (0..c.dim_count()).map(|n| check_controlled_additivity(&s, n, &mut rng, 2, 10).unwrap()).collect()
    }

    #[test]
    fn cluster_of_circles_is_a_product() {
        let r = check(Attachment::Cluster, circle(), 10);
        assert!(r.iter().all(|x| x.passed()));
        assert_eq!(r[1].samples[0].relative, CanonicalGroup::free(10));
        assert!(r[0].samples[0].relative.is_zero());
    }

    #[test]
    fn disjoint_union_counts_components() {
        let r = check(Attachment::DisjointUnion, circle(), 6);
        assert!(r.iter().all(|x| x.passed()));
        assert_eq!(r[0].samples[0].relative, CanonicalGroup::free(6));
    }

    #[test]
    fn grids_with_torsion() {
        for a in [Attachment::Horizontal, Attachment::Vertical] {
            let r = check(a, projective_plane(), 9);
            assert!(r.iter().all(|x| x.passed()), "{a:?}");
            assert_eq!(r[1].samples[0].relative, CanonicalGroup::new(0, vec![BigInt::from(2); 9]));
        }
    }
}
