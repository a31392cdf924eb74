//! Checks of the homology axioms on finite pairs, controlled additivity on
//! scattered instances, and agreement of independent pipelines.

mod scattered;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

pub use scattered::{check_controlled_additivity, AdditivityReport, Attachment, KSample, ScatteredInstance};

use crate::algebra::{CanonicalGroup, GroupMap, IntMatrix, SubLattice};
use crate::complexes::standard::random_simplicial_complex;
use crate::complexes::{Cell, CellComplex, ChainMap, Coefficients, ComplexError, Pair, Subcomplex, ValidationReport};
use crate::steenrod::{steenrod_homology, SteenrodError};
use crate::towers::{build_telescope, Telescope, TelescopeCell, Tower};

/// A way of computing homology of finite pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Smith normal form of the cellular chain complex.
    DirectCellular,
    /// `H_{n+1}` of the depth-one telescope of the constant tower, relative
    /// to both ends and to the telescope of the subcomplex.
    TelescopeSteenrod,
    /// Homology recovered from cohomology: free part of `H^n`, torsion of `H^{n+1}`.
    CechDual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryHandle {
    pub pipeline: Pipeline,
}

impl TheoryHandle {
    pub fn new(pipeline: Pipeline) -> Self {
        TheoryHandle { pipeline }
    }

    pub fn evaluate(&self, pair: &Pair, n: usize) -> CanonicalGroup {
        let z = Coefficients::Integers;
        match self.pipeline {
            Pipeline::DirectCellular => pair.relative_homology(n, &z),
            Pipeline::TelescopeSteenrod => telescope_pair(pair).1.relative_homology(n + 1, &z),
            Pipeline::CechDual => {
                let free = pair.relative_cohomology(n, &z).rank();
                let torsion = pair.relative_cohomology(n + 1, &z).torsion().to_vec();
                CanonicalGroup::new(free, torsion)
            }
        }
    }

    /// Induced map of `f : X → Y` in degree `n`, in the pipeline's own
    /// bases. The telescope pipeline reports the map on `H_{n+1}(T, ends)`.
    pub fn induced(&self, f: &ChainMap, n: usize) -> Result<GroupMap, SteenrodError> {
        match self.pipeline {
            Pipeline::DirectCellular => Ok(f.induced_map(n)),
            Pipeline::CechDual => Ok(f.induced_cohomology_map(n)),
            Pipeline::TelescopeSteenrod => {
                let (tx, px) = telescope_pair(&Pair::absolute(f.source.clone()));
                let (ty, py) = telescope_pair(&Pair::absolute(f.target.clone()));
                let big_f = telescope_map(f, &tx, &ty)?;
                induced_relative(&px, &py, n + 1, |c| big_f.image(c).to_vec())
            }
        }
    }
}

/// Depth-one telescope of the constant tower on `pair.complex`, and the pair
/// `(T, T_A ∪ ends)`.
fn telescope_pair(pair: &Pair) -> (Telescope, Pair) {
    let tower = Tower::constant((*pair.complex).clone());
    let tel = build_telescope(&tower, 1).expect("depth one is available");
    let a = pair.sub.mask().to_vec();
    let over = tel.over(&[a.clone(), a]).expect("a constant subtower is closed");
    let sub = over.union(&tel.ends());
    let p = Pair::new(tel.complex.clone(), sub).expect("subcomplex of the telescope");
    (tel, p)
}

/// `f × id` between telescopes of constant towers.
fn telescope_map(f: &ChainMap, tx: &Telescope, ty: &Telescope) -> Result<ChainMap, ComplexError> {
    let index: HashMap<TelescopeCell, usize> = ty.cells().iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let images = tx
        .cells()
        .iter()
        .map(|c| {
            let (base, rebuild): (usize, fn(usize, usize) -> TelescopeCell) = match *c {
                TelescopeCell::Level { base, .. } => (base, |l, b| TelescopeCell::Level { level: l, base: b }),
                TelescopeCell::Prism { base, .. } => (base, |l, b| TelescopeCell::Prism { level: l, base: b }),
            };
            let level = match *c {
                TelescopeCell::Level { level, .. } | TelescopeCell::Prism { level, .. } => level,
            };
            f.image(base).iter().map(|(t, v)| (index[&rebuild(level, *t)], v.clone())).collect()
        })
        .collect();
    ChainMap::from_images(tx.complex.clone(), ty.complex.clone(), images)
}

/// Cells of dimension `n` outside the subcomplex, in basis order of the
/// relative chain complex.
pub(crate) fn kept_cells(pair: &Pair, n: usize) -> Vec<usize> {
    pair.complex.cells_in_dim(n).iter().copied().filter(|&c| !pair.sub.contains(c)).collect()
}

/// Matrix (columns in `src` generators, rows in `dst` generators) of the
/// map on relative homology of a cellular map given cell by cell. Cells
/// landing in the subcomplex of `dst` are dropped.
pub(crate) fn relative_matrix(
    src: &Pair,
    dst: &Pair,
    n: usize,
    image: impl Fn(usize) -> Vec<(usize, BigInt)>,
) -> Result<IntMatrix, SteenrodError> {
    let hs = src.relative_chain_complex().homology_basis(n);
    let hd = dst.relative_chain_complex().homology_basis(n);
    let src_cells = kept_cells(src, n);
    let dst_cells = kept_cells(dst, n);
    let slot: HashMap<usize, usize> = dst_cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut cols = Vec::new();
    for z in hs.representatives() {
        let mut w = vec![BigInt::zero(); dst_cells.len()];
        for (k, &c) in src_cells.iter().enumerate() {
            if z[k].is_zero() {
                continue;
            }
            for (t, v) in image(c) {
                if let Some(&s) = slot.get(&t) {
                    w[s] += &z[k] * v;
                }
            }
        }
        let class = hd
            .class_of(&w)
            .ok_or_else(|| SteenrodError::Unsupported(format!("image of a relative {n}-cycle is not a relative cycle")))?;
        cols.push(class);
    }
    Ok(IntMatrix::from_columns(&cols, hd.group().generators()))
}

pub(crate) fn induced_relative(
    src: &Pair,
    dst: &Pair,
    n: usize,
    image: impl Fn(usize) -> Vec<(usize, BigInt)>,
) -> Result<GroupMap, SteenrodError> {
    let m = relative_matrix(src, dst, n, image)?;
    let z = Coefficients::Integers;
    GroupMap::new(src.relative_homology(n, &z), dst.relative_homology(n, &z), m)
        .map_err(|e| SteenrodError::Unsupported(e.to_string()))
}

/// Whether `matrix` defines an isomorphism from `source` onto the product of
/// cyclic groups with the given orders (zero for `Z`).
pub(crate) fn is_iso_onto(source: &CanonicalGroup, matrix: &IntMatrix, moduli: &[BigInt]) -> bool {
    let n = source.generators();
    let rows = moduli.len();
    if matrix.rows() != rows || matrix.cols() != n {
        return false;
    }
    let target_rel: Vec<Vec<BigInt>> = moduli
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, m)| {
            let mut v = vec![BigInt::zero(); rows];
            v[k] = m.clone();
            v
        })
        .collect();
    let rel_matrix = IntMatrix::from_columns(&target_rel, rows);
    let stacked = matrix.hcat(&rel_matrix);
    let kernel: Vec<Vec<BigInt>> = SubLattice::kernel(&stacked).basis().iter().map(|v| v[..n].to_vec()).collect();
    let source_rel = SubLattice::span(&source.relations(), n);
    let injective = source_rel.contains_lattice(&SubLattice::span(&kernel, n));
    let mut image: Vec<Vec<BigInt>> = (0..n).map(|j| matrix.column(j)).collect();
    image.extend(target_rel);
    let surjective = SubLattice::span(&image, rows).same_as(&SubLattice::full(rows));
    injective && surjective
}

/// Long exact sequence of a pair, node by node.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub nodes: Vec<(String, bool)>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.nodes.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<String> {
        self.nodes.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect()
    }
}

pub fn check_exactness(pair: &Pair, top: usize) -> ExactnessReport {
    ExactnessReport { nodes: pair.exactness(top) }
}

/// `X = A ∪ B`; excision says `(B, A ∩ B) → (X, A)` is a homology isomorphism.
#[derive(Clone, Debug)]
pub struct ExcisionInstance {
    pub name: String,
    pub complex: Arc<CellComplex>,
    pub a: Subcomplex,
    pub b: Subcomplex,
}

impl ExcisionInstance {
    pub fn new(name: impl Into<String>, complex: Arc<CellComplex>, a: Subcomplex, b: Subcomplex) -> Result<Self, String> {
        let name = name.into();
        if !a.union(&b).mask().iter().all(|&x| x) {
            return Err(format!("{name}: the two subcomplexes do not cover the complex"));
        }
        Ok(ExcisionInstance { name, complex, a, b })
    }

    /// Excision of nothing: `B = X`.
    pub fn trivial(name: impl Into<String>, pair: &Pair) -> Self {
        ExcisionInstance {
            name: name.into(),
            complex: pair.complex.clone(),
            a: pair.sub.clone(),
            b: Subcomplex::full(pair.complex.clone()),
        }
    }

    pub fn pair(&self) -> Pair {
        Pair::new(self.complex.clone(), self.a.clone()).expect("same parent")
    }
}

#[derive(Clone, Debug)]
pub struct ExcisionReport {
    /// Per instance, per degree: whether the excision map is an isomorphism.
    pub entries: Vec<(String, Vec<bool>)>,
    /// Point has `H_0 = Z` and nothing else, in every pipeline.
    pub dimension: bool,
}

impl ExcisionReport {
    pub fn passed(&self) -> bool {
        self.dimension && self.entries.iter().all(|(_, d)| d.iter().all(|&b| b))
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .flat_map(|(name, d)| d.iter().enumerate().filter(|(_, ok)| !**ok).map(move |(n, _)| format!("{name}: degree {n}")))
            .collect();
        if !self.dimension {
            out.push("dimension axiom".into());
        }
        out
    }
}

fn excision_degrees(inst: &ExcisionInstance) -> Result<Vec<bool>, SteenrodError> {
    let x = &inst.complex;
    let b_complex = Arc::new(inst.b.as_complex());
    let ab_ids: Vec<String> = inst.a.intersection(&inst.b).cells().iter().map(|&c| x.id(c).to_string()).collect();
    let small = Pair::new(b_complex.clone(), Subcomplex::new(b_complex.clone(), &ab_ids)?)?;
    let big = inst.pair();
    let top = x.dim_count();
    (0..=top)
        .map(|n| {
            let f = induced_relative(&small, &big, n, |c| vec![(x.lookup(b_complex.id(c)).expect("same ids"), BigInt::one())])?;
            Ok(f.is_isomorphism())
        })
        .collect()
}

pub fn check_excision_and_dimension(instances: &[ExcisionInstance]) -> Result<ExcisionReport, SteenrodError> {
    let entries = instances
        .iter()
        .map(|inst| Ok((inst.name.clone(), excision_degrees(inst)?)))
        .collect::<Result<Vec<_>, SteenrodError>>()?;
    let point = Pair::absolute(Arc::new(crate::complexes::standard::point()));
    let dimension = [Pipeline::DirectCellular, Pipeline::TelescopeSteenrod, Pipeline::CechDual].iter().all(|&p| {
        let h = TheoryHandle::new(p);
        (0..4).all(|n| h.evaluate(&point, n) == if n == 0 { CanonicalGroup::free(1) } else { CanonicalGroup::zero() })
    });
    Ok(ExcisionReport { entries, dimension })
}

/// `X/A` with `A` collapsed to one vertex, and the index of that vertex.
pub fn collapse(pair: &Pair) -> (Arc<CellComplex>, usize) {
    let x = &pair.complex;
    let mut base = "*".to_string();
    while x.lookup(&base).is_some() {
        base.push('\'');
    }
    let mut cells = vec![Cell::vertex(base.clone())];
    for c in 0..x.len() {
        if pair.sub.contains(c) {
            continue;
        }
        let mut boundary: Vec<(String, BigInt)> = Vec::new();
        for (f, v) in x.boundary_of(c) {
            if !pair.sub.contains(*f) {
                boundary.push((x.id(*f).to_string(), v.clone()));
            } else if x.dim(*f) == 0 {
                boundary.push((base.clone(), v.clone()));
            }
        }
        if boundary.is_empty() && x.dim(c) == 1 {
            boundary.push((base.clone(), BigInt::zero()));
        }
        cells.push(Cell { id: x.id(c).to_string(), dim: x.dim(c), boundary });
    }
    (Arc::new(CellComplex::new(cells).expect("quotient cells are well formed")), 0)
}

/// Per degree: `H_n(X, A)`, `H_n(X/A, *)`, and whether the quotient map is an isomorphism.
#[derive(Clone, Debug)]
pub struct StrongExcisionReport {
    pub degrees: Vec<(CanonicalGroup, CanonicalGroup, bool)>,
    pub quotient_valid: bool,
}

impl StrongExcisionReport {
    pub fn passed(&self) -> bool {
        self.quotient_valid && self.degrees.iter().all(|d| d.2)
    }
}

pub fn check_strong_excision(pair: &Pair) -> Result<StrongExcisionReport, SteenrodError> {
    let (q, base) = collapse(pair);
    let quotient_valid = q.validate().is_ok();
    let qp = Pair::new(q.clone(), Subcomplex::closure(q.clone(), [base]))?;
    let x = &pair.complex;
    let degrees = (0..=x.dim_count())
        .map(|n| {
            let f = induced_relative(pair, &qp, n, |c| match q.lookup(x.id(c)) {
                Some(t) => vec![(t, BigInt::one())],
                None => vec![],
            })?;
            Ok((f.source.clone(), f.target.clone(), f.is_isomorphism()))
        })
        .collect::<Result<Vec<_>, SteenrodError>>()?;
    Ok(StrongExcisionReport { degrees, quotient_valid })
}

/// Builds a complex; `∂∂ ≠ 0` and wrong face dimensions come back as a
/// [`ValidationReport`] naming the cells involved.
pub fn validate_cells(cells: Vec<Cell>) -> Result<CellComplex, ValidationError> {
    match CellComplex::new_valid(cells) {
        Ok(k) => Ok(k),
        Err(ComplexError::Invalid(r)) => Err(ValidationError::Invalid(r)),
        Err(other) => Err(ValidationError::Malformed(other)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("complex is invalid: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Malformed(ComplexError),
}

/// A finite complex together with maps out of it, for the cross-check.
#[derive(Clone, Debug)]
pub struct UniquenessInstance {
    pub name: String,
    pub complex: Arc<CellComplex>,
    pub maps: Vec<(String, ChainMap)>,
}

#[derive(Clone, Debug)]
pub struct DegreeAgreement {
    pub degree: usize,
    pub direct: CanonicalGroup,
    pub telescope: CanonicalGroup,
    pub dual: CanonicalGroup,
    /// Cross-checked Steenrod homology of the constant tower.
    pub steenrod: Option<CanonicalGroup>,
}

impl DegreeAgreement {
    pub fn agrees(&self) -> bool {
        self.direct == self.telescope && self.direct == self.dual && self.steenrod.as_ref() == Some(&self.direct)
    }
}

#[derive(Clone, Debug)]
pub struct UniquenessEntry {
    pub name: String,
    pub cells: usize,
    pub degrees: Vec<DegreeAgreement>,
    /// `(map, degree, square commutes and both identifications are isomorphisms)`.
    pub naturality: Vec<(String, usize, bool)>,
}

impl UniquenessEntry {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.agrees()) && self.naturality.iter().all(|n| n.2)
    }
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub entries: Vec<UniquenessEntry>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }
}

/// `H_n(X) → H_{n+1}(T, ends)`, `[z] ↦ [prism over z]`.
fn suspension_iso(x: &Arc<CellComplex>, tel: &Telescope, tp: &Pair, n: usize) -> Result<GroupMap, SteenrodError> {
    let hx = x.chain_complex().homology_basis(n);
    let ht = tp.relative_chain_complex().homology_basis(n + 1);
    let kept = kept_cells(tp, n + 1);
    let cols = hx
        .representatives()
        .iter()
        .map(|z| {
            let w: Vec<BigInt> = kept
                .iter()
                .map(|&k| match tel.cell(k) {
                    TelescopeCell::Prism { level: 0, base } if x.dim(base) == n => z[x.position(base)].clone(),
                    _ => BigInt::zero(),
                })
                .collect();
            ht.class_of(&w).ok_or_else(|| SteenrodError::Unsupported("prism over a cycle is not a relative cycle".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupMap::new(hx.group().clone(), ht.group().clone(), IntMatrix::from_columns(&cols, ht.group().generators()))
        .map_err(|e| SteenrodError::Unsupported(e.to_string()))
}

fn same_map(a: &GroupMap, b: &GroupMap) -> bool {
    if a.source != b.source || a.target != b.target {
        return false;
    }
    let (ma, mb) = (a.matrix(), b.matrix());
    (0..ma.cols()).all(|j| a.target.reduce(&ma.column(j)) == b.target.reduce(&mb.column(j)))
}

/// Naturality square for `f` in degree `n` between cellular homology and the
/// telescope pipeline.
pub fn naturality_check(f: &ChainMap, n: usize) -> Result<bool, SteenrodError> {
    let (tx, px) = telescope_pair(&Pair::absolute(f.source.clone()));
    let (ty, py) = telescope_pair(&Pair::absolute(f.target.clone()));
    let theta_x = suspension_iso(&f.source, &tx, &px, n)?;
    let theta_y = suspension_iso(&f.target, &ty, &py, n)?;
    let big_f = TheoryHandle::new(Pipeline::TelescopeSteenrod).induced(f, n)?;
    let small_f = f.induced_map(n);
    let err = |e: crate::algebra::AlgebraError| SteenrodError::Unsupported(e.to_string());
    let left = big_f.compose(&theta_x).map_err(err)?;
    let right = theta_y.compose(&small_f).map_err(err)?;
    Ok(theta_x.is_isomorphism() && theta_y.is_isomorphism() && same_map(&left, &right))
}

pub fn uniqueness_cross_check(instances: &[UniquenessInstance]) -> Result<UniquenessReport, SteenrodError> {
    let run = |inst: &UniquenessInstance| -> Result<UniquenessEntry, SteenrodError> {
        let pair = Pair::absolute(inst.complex.clone());
        let tower = Tower::try_constant((*inst.complex).clone())?;
        let handles = [Pipeline::DirectCellular, Pipeline::TelescopeSteenrod, Pipeline::CechDual].map(TheoryHandle::new);
        let degrees = (0..=inst.complex.dim_count())
            .map(|n| {
                let s = steenrod_homology(&tower, n)?;
                Ok(DegreeAgreement {
                    degree: n,
                    direct: handles[0].evaluate(&pair, n),
                    telescope: handles[1].evaluate(&pair, n),
                    dual: handles[2].evaluate(&pair, n),
                    steenrod: s.group.as_exact().cloned(),
                })
            })
            .collect::<Result<Vec<_>, SteenrodError>>()?;
        let mut naturality = Vec::new();
        for (name, f) in &inst.maps {
            for n in 0..f.source.dim_count() {
                naturality.push((name.clone(), n, naturality_check(f, n)?));
            }
        }
        Ok(UniquenessEntry { name: inst.name.clone(), cells: inst.complex.len(), degrees, naturality })
    };
    let results = crate::exec::map(crate::exec::Strategy::default(), instances, run);
    Ok(UniquenessReport { entries: results.into_iter().collect::<Result<Vec<_>, _>>()? })
}

/// Random simplicial complex with a random subcomplex (closure of random cells).
pub fn random_pair<R: Rng>(rng: &mut R, max_cells: usize) -> Pair {
    let x = Arc::new(random_simplicial_complex(rng, max_cells));
    let picks: Vec<usize> = (0..x.len()).filter(|_| rng.gen_bool(0.3)).collect();
    let sub = Subcomplex::closure(x.clone(), picks);
    Pair::new(x, sub).expect("same parent")
}

/// Random cover `X = A ∪ B` by two subcomplexes.
pub fn random_excision<R: Rng>(rng: &mut R, name: impl Into<String>, max_cells: usize) -> ExcisionInstance {
    let x = Arc::new(random_simplicial_complex(rng, max_cells));
    let chosen: Vec<bool> = (0..x.len()).map(|_| rng.gen_bool(0.5)).collect();
    let b = Subcomplex::closure(x.clone(), (0..x.len()).filter(|&c| chosen[c]));
    let a = Subcomplex::closure(x.clone(), (0..x.len()).filter(|&c| !b.contains(c)));
    ExcisionInstance::new(name, x, a, b).expect("complementary closures cover")
}

/// Disk split into an inner disk and a collar, with the collar as `A`.
pub fn collar_excision() -> ExcisionInstance {
    let x = Arc::new(
        CellComplex::new_valid(vec![
            Cell::vertex("v"),
            Cell::vertex("w"),
            Cell::new("e", 1, &[("v", 1), ("v", -1)]),
            Cell::new("g", 1, &[("w", 1), ("w", -1)]),
            Cell::new("s", 1, &[("w", 1), ("v", -1)]),
            Cell::new("d", 2, &[("e", 1)]),
            Cell::new("c", 2, &[("g", 1), ("s", 1), ("e", -1), ("s", -1)]),
        ])
        .expect("collar cells are valid"),
    );
    let a = Subcomplex::new(x.clone(), &["v", "w", "e", "g", "s", "c"]).expect("closed");
    let b = Subcomplex::new(x.clone(), &["v", "e", "d"]).expect("closed");
    ExcisionInstance::new("collar", x, a, b).expect("a and b cover")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::complexes::standard::*;

    #[test]
    fn disk_relative_to_its_boundary_is_exact() {
        let (d, s) = disk_pair();
        let p = Pair::new(d, s).unwrap();
        assert!(check_exactness(&p, 2).passed());
        let x = Arc::new(torus());
        assert!(check_exactness(&Pair::absolute(x.clone()), 2).passed());
        assert!(check_exactness(&Pair::new(x.clone(), Subcomplex::full(x)).unwrap(), 2).passed());
    }

    #[test]
    fn excision_of_a_collar() {
        let inst = collar_excision();
        assert_eq!(inst.pair().relative_homology(2, &Coefficients::Integers), CanonicalGroup::free(1));
        let (d, s) = disk_pair();
        let trivial = ExcisionInstance::trivial("nothing", &Pair::new(d, s).unwrap());
        let r = check_excision_and_dimension(&[inst, trivial]).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn random_excisions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let insts: Vec<ExcisionInstance> = (0..15).map(|k| random_excision(&mut rng, format!("r{k}"), 60)).collect();
        assert!(check_excision_and_dimension(&insts).unwrap().passed());
    }

    #[test]
    fn collapsing_an_arc_gives_a_wedge() {
        // two loops joined by an arc `s`
        let x = Arc::new(
            CellComplex::new_valid(vec![
                Cell::vertex("p"),
                Cell::vertex("q"),
                Cell::new("a", 1, &[("p", 1), ("p", -1)]),
                Cell::new("b", 1, &[("q", 1), ("q", -1)]),
                Cell::new("s", 1, &[("q", 1), ("p", -1)]),
            ])
            .unwrap(),
        );
        let arc = Subcomplex::closure(x.clone(), [x.lookup("s").unwrap()]);
        let r = check_strong_excision(&Pair::new(x, arc).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.degrees[1].1, CanonicalGroup::free(2));
    }

    #[test]
    fn cylinder_over_one_end() {
        let s = Arc::new(circle());
        let cyl = crate::complexes::mapping_cylinder(&ChainMap::identity(s)).unwrap();
        let end = Subcomplex::new(cyl.complex.clone(), &["src:v", "src:e"]).unwrap();
        let r = check_strong_excision(&Pair::new(cyl.complex.clone(), end).unwrap()).unwrap();
        assert!(r.passed());
        let p = Arc::new(point());
        let r = check_strong_excision(&Pair::new(p.clone(), Subcomplex::full(p)).unwrap()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn pipelines_agree_and_are_natural() {
        let s = Arc::new(circle());
        let t = Arc::new(torus());
        let double = circle_power_map(&s, 2);
        let stretch = ChainMap::new(
            t.clone(),
            t.clone(),
            &[
                ("v".into(), vec![("v".into(), BigInt::one())]),
                ("a".into(), vec![("a".into(), BigInt::from(2))]),
                ("b".into(), vec![("b".into(), BigInt::one())]),
                ("f".into(), vec![("f".into(), BigInt::from(2))]),
            ],
        )
        .unwrap();
        let insts = vec![
            UniquenessInstance { name: "circle".into(), complex: s.clone(), maps: vec![("double".into(), double.clone())] },
            UniquenessInstance { name: "torus".into(), complex: t.clone(), maps: vec![("stretch".into(), stretch)] },
            UniquenessInstance {
                name: "rp2".into(),
                complex: Arc::new(projective_plane()),
                maps: vec![("id".into(), ChainMap::identity(Arc::new(projective_plane())))],
            },
        ];
        let r = uniqueness_cross_check(&insts).unwrap();
        assert!(r.passed(), "{r:?}");
        let h = TheoryHandle::new(Pipeline::TelescopeSteenrod);
        let m = h.induced(&double, 1).unwrap();
        assert_eq!(m.matrix().get(0, 0).magnitude(), &num_bigint::BigUint::from(2u32));
        let id = h.induced(&ChainMap::identity(t.clone()), 1).unwrap();
        assert!(same_map(&id, &GroupMap::identity(&id.source)));
    }

    #[test]
    fn corrupted_boundary_is_named() {
        let cells = vec![
            Cell::vertex("v"),
            Cell::new("a", 1, &[("v", 1), ("v", -1)]),
            Cell::new("b", 1, &[("v", 1)]),
            Cell::new("f", 2, &[("a", 1), ("b", 1)]),
        ];
        let Err(ValidationError::Invalid(r)) = validate_cells(cells) else { panic!("accepted a corrupted complex") };
        assert!(r.cells().contains(&"f".to_string()));
    }

    #[test]
    fn iso_onto_products() {
        let g = CanonicalGroup::new(0, vec![BigInt::from(6)]);
        // Z/6 → Z/2 × Z/3, x ↦ (x, x)
        let m = IntMatrix::from_rows(&[vec![1], vec![1]]);
        assert!(is_iso_onto(&g, &m, &[BigInt::from(2), BigInt::from(3)]));
        assert!(!is_iso_onto(&g, &m, &[BigInt::from(2), BigInt::from(2)]));
    }
}
