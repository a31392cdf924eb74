use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SteenrodError;
use crate::algebra::{CanonicalGroup, IntMatrix};
use crate::complexes::{CellComplex, Coefficients, Pair, Subcomplex};
use crate::towers::{build_telescope, Restriction, TelescopeCell, Tower, TowersError};

/// Comparison of the skeletal filtration of a truncated telescope with its
/// cellular chain complex.
#[derive(Clone, Debug, Serialize)]
pub struct SkeletalReport {
    pub depth: usize,
    /// `k ↦` whether `H_*(T^k, T^{k-1})` is free of rank `#k-cells`, concentrated in degree `k`.
    pub concentrated: Vec<bool>,
    /// `k ↦` whether the connecting map of the skeletal triple equals `∂_k`
    /// entrywise after identifying both sides with the cells (`k ≥ 1`).
    pub boundary_matches: Vec<bool>,
    /// `m ↦` least `k` such that `H_m(T^{k'}) → H_m(T)` is an isomorphism for all `k' ≥ k`.
    pub stabilization: Vec<usize>,
    pub mismatches: Vec<String>,
}

impl SkeletalReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn skeleton_complex(t: &Arc<CellComplex>, k: Option<usize>) -> Arc<CellComplex> {
    match k {
        Some(k) => Arc::new(Subcomplex::skeleton(t.clone(), k).as_complex()),
        None => Arc::new(CellComplex::empty()),
    }
}

fn skeleton_pair(t: &Arc<CellComplex>, k: usize) -> Pair {
    let top = skeleton_complex(t, Some(k));
    let sub = match k {
        0 => Subcomplex::empty(top.clone()),
        _ => Subcomplex::skeleton(top.clone(), k - 1),
    };
    Pair::new(top, sub).expect("a skeleton is a subcomplex")
}

/// Columns: the class in `H_k(T^k, T^{k-1})` of each `k`-cell.
fn cell_classes(pair: &Pair, k: usize) -> IntMatrix {
    let basis = pair.relative_chain_complex().homology_basis(k);
    let n = pair.complex.count(k);
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|c| {
            let mut e = vec![BigInt::zero(); n];
            e[c] = BigInt::one();
            basis.class_of(&e).expect("every top cell is a relative cycle")
        })
        .collect();
    IntMatrix::from_columns(&cols, basis.group().generators())
}

pub fn skeletal_correspondence_check(tower: &Tower, depth: usize) -> Result<SkeletalReport, SteenrodError> {
    let tel = build_telescope(tower, depth)?;
    let t = tel.complex.clone();
    let top = t.dimension().unwrap_or(0);
    let mut mismatches = Vec::new();

    let pairs: Vec<Pair> = (0..=top).map(|k| skeleton_pair(&t, k)).collect();
    let mut concentrated = Vec::new();
    for (k, pair) in pairs.iter().enumerate() {
        let mut ok = true;
        for m in 0..=top + 1 {
            let h = pair.relative_homology(m, &Coefficients::Integers);
            let expect = if m == k { CanonicalGroup::free(t.count(k)) } else { CanonicalGroup::zero() };
            if h != expect {
                ok = false;
                mismatches.push(format!("H_{m}(T^{k}, T^{}) = {h}, expected {expect}", k as i64 - 1));
            }
        }
        concentrated.push(ok);
    }

    let mut boundary_matches = Vec::new();
    for k in 1..=top {
        let delta = pairs[k].sequence(k).connecting;
        let proj = pairs[k - 1].sequence(k - 1).projection;
        let composite = proj.compose(&delta).map_err(|e| SteenrodError::Unsupported(e.to_string()))?;
        let lhs = composite.matrix().mul(&cell_classes(&pairs[k], k));
        let rhs = cell_classes(&pairs[k - 1], k - 1).mul(&t.boundary_matrix(k));
        let ok = lhs == rhs;
        if !ok {
            mismatches.push(format!("connecting map of the triple differs from the boundary in degree {k}"));
        }
        boundary_matches.push(ok);
    }

    let stabilization = (0..=top)
        .map(|m| {
            let iso = |k: usize| Subcomplex::skeleton(t.clone(), k).inclusion().induced_map(m).is_isomorphism();
            let mut first = top;
            for k in (0..top).rev() {
                if iso(k) {
                    first = k;
                } else {
                    break;
                }
            }
            first
        })
        .collect();
    Ok(SkeletalReport { depth, concentrated, boundary_matches, stabilization, mismatches })
}

/// Relative chain complexes of a pair of restrictions `B ⊆ A`, built on the
/// telescope of depth `depth` with the far end of `A` collapsed.
#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub depth: usize,
    pub generators_agree: bool,
    pub generators: usize,
    /// `(subcomplex route, quotient route)` per degree.
    #[serde(skip)]
    pub homology: Vec<(CanonicalGroup, CanonicalGroup)>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.generators_agree && self.homology.iter().all(|(a, b)| a == b)
    }
}

fn masks(r: &Restriction, depth: usize) -> Result<Vec<Vec<bool>>, SteenrodError> {
    (0..=depth)
        .map(|k| {
            let l = r.level(k);
            if l.unbounded {
                Err(TowersError::InvalidRestriction(format!("level {k} has an infinite part")).into())
            } else {
                Ok(l.core.clone())
            }
        })
        .collect()
}

/// `C(A_{[0,d]}) / (C(B_{[0,d]}) + C(A_d))` computed two ways: as relative
/// homology of a pair of subcomplexes of the telescope, and as the quotient
/// of the full telescope chain complex on the cells over `A ∖ B` below the
/// far end. Generator sets and homology must coincide.
pub fn telescope_complexes_agree(
    tower: &Tower,
    a: &Restriction,
    b: &Restriction,
    depth: usize,
) -> Result<AgreementReport, SteenrodError> {
    if !b.is_subset_of(a) {
        return Err(TowersError::InvalidRestriction("the second restriction is not inside the first".into()).into());
    }
    let tel = build_telescope(tower, depth)?;
    let (ma, mb) = (masks(a, depth)?, masks(b, depth)?);
    let t = tel.complex.clone();

    // route one: subcomplexes
    let over_a = tel.over(&ma).ok_or_else(|| TowersError::InvalidRestriction("not closed in the telescope".into()))?;
    let over_b = tel.over(&mb).ok_or_else(|| TowersError::InvalidRestriction("not closed in the telescope".into()))?;
    let far = over_a.intersection(&tel.level_subcomplex(depth));
    let sub_ids: Vec<String> = over_b.union(&far).cells().iter().map(|&c| t.id(c).to_string()).collect();
    let xa = Arc::new(over_a.as_complex());
    let pair = Pair::new(xa.clone(), Subcomplex::new(xa.clone(), &sub_ids)?)?;
    let route_one: BTreeSet<String> =
        (0..xa.len()).filter(|&c| !pair.sub.contains(c)).map(|c| xa.id(c).to_string()).collect();

    // route two: cell-by-cell membership in A ∖ B away from the far end
    let inside = |mask: &[Vec<bool>], c: TelescopeCell| match c {
        TelescopeCell::Level { level, base } => mask[level][base],
        TelescopeCell::Prism { level, base } => mask[level + 1][base],
    };
    let keep_cell = |k: usize| {
        let c = tel.cell(k);
        let at_far = matches!(c, TelescopeCell::Level { level, .. } if level == depth);
        inside(&ma, c) && !inside(&mb, c) && !at_far
    };
    let route_two: BTreeSet<String> = (0..t.len()).filter(|&k| keep_cell(k)).map(|k| t.id(k).to_string()).collect();
    let keep: Vec<Vec<usize>> = (0..t.dim_count())
        .map(|n| t.cells_in_dim(n).iter().filter(|&&k| keep_cell(k)).map(|&k| t.position(k)).collect())
        .collect();
    let quotient = t.chain_complex().quotient(&keep);

    let top = t.dim_count();
    let homology = (0..=top)
        .map(|n| (pair.relative_homology(n, &Coefficients::Integers), quotient.homology(n)))
        .collect();
    Ok(AgreementReport { depth, generators_agree: route_one == route_two, generators: route_one.len(), homology })
}

/// Kronecker pairing of free cohomology classes with free homology classes
/// of a truncated telescope; perfect when the determinant is a unit.
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub degree: usize,
    pub rank: usize,
    #[serde(serialize_with = "crate::steenrod::skeletal::big_as_string")]
    pub determinant: BigInt,
}

impl PairingReport {
    pub fn perfect(&self) -> bool {
        self.determinant.abs().is_one()
    }
}

pub(crate) fn big_as_string<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn hom_duality_check(tower: &Tower, depth: usize) -> Result<Vec<PairingReport>, SteenrodError> {
    let tel = build_telescope(tower, depth)?;
    let cc = tel.complex.chain_complex();
    let top = tel.complex.dim_count();
    Ok((0..top)
        .map(|n| {
            let hb = cc.homology_basis(n);
            let cb = cc.cohomology_basis(n);
            let free = |g: &CanonicalGroup| (0..g.generators()).filter(|&k| g.modulus(k).is_zero()).collect::<Vec<_>>();
            let (hf, cf) = (free(hb.group()), free(cb.group()));
            let rows: Vec<Vec<BigInt>> = cf
                .iter()
                .map(|&a| {
                    let phi = &cb.representatives()[a];
                    hf.iter()
                        .map(|&b| phi.iter().zip(&hb.representatives()[b]).map(|(x, y)| x * y).sum())
                        .collect()
                })
                .collect();
            let m = IntMatrix::from_big_rows(&rows, hf.len());
            let determinant = if cf.len() == hf.len() { m.determinant() } else { BigInt::zero() };
            PairingReport { degree: n, rank: hf.len(), determinant }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complexes::standard::*;
    use crate::towers::LevelSet;

    #[test]
    fn torus_stabilizes_at_two() {
        let r = skeletal_correspondence_check(&Tower::constant(torus()), 1).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.stabilization[1], 2);
        assert_eq!(r.boundary_matches.len(), 3);
    }

    #[test]
    fn point_and_circle_correspond() {
        for k in [point(), circle()] {
            for depth in 0..3 {
                let r = skeletal_correspondence_check(&Tower::constant(k.clone()), depth).unwrap();
                assert!(r.passed(), "{:?}", r.mismatches);
                assert!(r.concentrated.iter().all(|&b| b));
            }
        }
    }

    #[test]
    fn solenoid_telescope_corresponds() {
        let s = Arc::new(circle());
        let t = Tower::periodic(circle_power_map(&s, 2)).unwrap();
        let r = skeletal_correspondence_check(&t, 3).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
    }

    #[test]
    fn full_against_level_zero() {
        let t = Arc::new(Tower::constant(circle()));
        let full = Restriction::full(t.clone()).unwrap();
        let n0 = t.level(0).unwrap().len();
        let base = Restriction::then_empty(t.clone(), vec![LevelSet::full(n0)]).unwrap();
        let r = telescope_complexes_agree(&t, &full, &base, 3).unwrap();
        assert!(r.agrees(), "{r:?}");
        assert_eq!(r.homology[2].0, CanonicalGroup::free(1));
        // shifted homology of the circle: H_{n+1} = H_n(S^1)
        assert_eq!(r.homology[1].0, CanonicalGroup::free(1));
        assert!(r.homology[0].0.is_zero() && r.homology[3].0.is_zero());
        let same = telescope_complexes_agree(&t, &full, &full, 3).unwrap();
        assert!(same.agrees());
        assert!(same.homology.iter().all(|(g, _)| g.is_zero()));
    }

    #[test]
    fn random_subtower_pairs_agree() {
        let s = Arc::new(circle());
        let towers = [
            Arc::new(Tower::periodic(circle_power_map(&s, 2)).unwrap()),
            Arc::new(Tower::constant(torus())),
            Arc::new(Tower::constant(disjoint_circles(2))),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for t in &towers {
            for _ in 0..10 {
                let a = Restriction::random(t.clone(), &mut rng, 0.5, 0, None).unwrap();
                let b = a.intersection(&a.random_sub(&mut rng, 0.5));
                let r = telescope_complexes_agree(t, &a, &b, 2).unwrap();
                assert!(r.agrees(), "{:?}", r.homology);
            }
        }
    }

    #[test]
    fn kronecker_pairing_is_perfect() {
        for k in [torus(), projective_plane(), wedge_of_circles(3)] {
            for r in hom_duality_check(&Tower::constant(k), 2).unwrap() {
                assert!(r.perfect(), "degree {}", r.degree);
            }
        }
    }
}
