//! Subgroups of products `∏_{ℕ²} G` cut out by ideals of supports, the
//! comparison between colimits of products and limits of sums, and the
//! exchange of a colimit over step functions with a product of colimits.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{tower_colim, CanonicalGroup, ColimCalculus, Direction, GroupTower, TowerError};
use crate::ideals::{
    in_ideal, meets_every_member_finitely, random_step, AxisSet, Family, IdealKind, IdealsError, IndexIdeal,
    PairedIdeals, SemilinearSet, StepFunction,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KDirectError {
    #[error(transparent)]
    Ideals(#[from] IdealsError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("regions {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("value has {got} coordinates, the group has {expected} generators")]
    WrongArity { expected: usize, got: usize },
    #[error("elements live in different groups")]
    GroupMismatch,
    #[error("tower levels must all be the same group")]
    NonUniformTower,
    #[error("colimit of the tower is not computable")]
    ColimUnavailable,
    #[error("no common level found for index {index} within {bound} levels")]
    LevelSearchExhausted { index: u64, bound: usize },
}

/// Element of `∏_{ℕ²} G` that is constant on finitely many disjoint regions
/// and zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternElement {
    group: CanonicalGroup,
    pieces: Vec<(SemilinearSet, Vec<BigInt>)>,
}

impl PatternElement {
    pub fn new(group: CanonicalGroup, pieces: Vec<(SemilinearSet, Vec<BigInt>)>) -> Result<Self, KDirectError> {
        let mut kept: Vec<(SemilinearSet, Vec<BigInt>)> = Vec::new();
        for (region, value) in pieces {
            if value.len() != group.generators() {
                return Err(KDirectError::WrongArity { expected: group.generators(), got: value.len() });
            }
            let value = group.reduce(&value);
            if value.iter().all(Zero::is_zero) || region.is_empty()? {
                continue;
            }
            kept.push((region, value));
        }
        for a in 0..kept.len() {
            for b in a + 1..kept.len() {
                if !kept[a].0.intersect(&kept[b].0).is_empty()? {
                    return Err(KDirectError::Overlap(a, b));
                }
            }
        }
        Ok(PatternElement { group, pieces: kept })
    }

    pub fn zero(group: CanonicalGroup) -> Self {
        PatternElement { group, pieces: vec![] }
    }

    /// `value` on `region`, zero elsewhere.
    pub fn constant(group: CanonicalGroup, region: SemilinearSet, value: &[i64]) -> Result<Self, KDirectError> {
        PatternElement::new(group, vec![(region, value.iter().map(|&v| BigInt::from(v)).collect())])
    }

    pub fn group(&self) -> &CanonicalGroup {
        &self.group
    }

    pub fn pieces(&self) -> &[(SemilinearSet, Vec<BigInt>)] {
        &self.pieces
    }

    pub fn value_at(&self, i: u64, j: u64) -> Vec<BigInt> {
        self.pieces
            .iter()
            .find(|(r, _)| r.contains(i, j))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| vec![BigInt::zero(); self.group.generators()])
    }

    /// Exact set of indices with a nonzero value.
    pub fn support(&self) -> SemilinearSet {
        self.pieces.iter().fold(SemilinearSet::empty(), |acc, (r, _)| acc.union(r))
    }

    pub fn neg(&self) -> PatternElement {
        let pieces = self.pieces.iter().map(|(r, v)| (r.clone(), self.group.reduce(&v.iter().map(|x| -x).collect::<Vec<_>>()))).collect();
        PatternElement { group: self.group.clone(), pieces }
    }

    pub fn add(&self, other: &PatternElement) -> Result<PatternElement, KDirectError> {
        if self.group != other.group {
            return Err(KDirectError::GroupMismatch);
        }
        let (mine, theirs) = (self.support(), other.support());
        let mut pieces = Vec::new();
        for (a, x) in &self.pieces {
            for (b, y) in &other.pieces {
                let v: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                pieces.push((a.intersect(b), v));
            }
            pieces.push((a.difference(&theirs), x.clone()));
        }
        for (b, y) in &other.pieces {
            pieces.push((b.difference(&mine), y.clone()));
        }
        PatternElement::new(self.group.clone(), pieces)
    }
}

/// Whether `g` lies in the subgroup of elements with support in `ideal`.
pub fn in_kdirect_sum(g: &PatternElement, ideal: &IndexIdeal) -> Result<bool, KDirectError> {
    Ok(in_ideal(&g.support(), ideal)?.member)
}

/// Membership of one element on both sides of the comparison maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiReport {
    /// Support lies in `κ`: the element comes from the colimit of products over `κ`.
    pub colim_of_products: bool,
    /// Support meets every member of `ν̄` finitely: the element is in the limit of sums over `ν̄`.
    pub lim_of_sums: bool,
    /// Support meets every member of `κ` finitely (cohomological limit of sums).
    pub dual_lim_of_sums: bool,
    /// Support lies in `ν̄` (cohomological colimit of products).
    pub dual_colim_of_products: bool,
}

impl ChiReport {
    pub fn agrees(&self) -> bool {
        self.colim_of_products == self.lim_of_sums && self.dual_lim_of_sums == self.dual_colim_of_products
    }
}

/// Decides both memberships through independent predicates: ideal
/// membership with a covering generator on one side, finite meeting with
/// every member of the other ideal on the other.
pub fn chi_check(g: &PatternElement, pair: &PairedIdeals) -> Result<ChiReport, KDirectError> {
    let s = g.support();
    Ok(ChiReport {
        colim_of_products: in_ideal(&s, &pair.kappa)?.member,
        lim_of_sums: meets_every_member_finitely(&s, &pair.nubar)?.0,
        dual_lim_of_sums: meets_every_member_finitely(&s, &pair.kappa)?.0,
        dual_colim_of_products: in_ideal(&s, &pair.nubar)?.member,
    })
}

/// Random element of `∏ Z` with a semilinear support oriented for `pair`.
pub fn random_pattern<R: Rng>(rng: &mut R, pair: &PairedIdeals) -> PatternElement {
    let z = CanonicalGroup::free(1);
    let first = crate::ideals::random_set(rng, pair.orientation());
    let second = crate::ideals::random_set(rng, pair.orientation()).difference(&first);
    let value = |rng: &mut R| vec![BigInt::from(rng.gen_range(-3i64..=3))];
    let pieces = vec![(first, value(rng)), (second, value(rng))];
    PatternElement::new(z, pieces).expect("disjoint by construction")
}

/// The four subgroups `⊕_{ℕ²} ⊆ ⊕_j ∏_i ⊆ ∏_i ⊕_j ⊆ ∏_{ℕ²}` as ideals of
/// supports: finite sets, sets in finitely many rows, sets with every column
/// finite, everything.
pub fn strictness_levels() -> [IndexIdeal; 4] {
    [
        IndexIdeal::new(IdealKind::KappaType, Family::Finite),
        PairedIdeals::horizontal().kappa,
        PairedIdeals::vertical().kappa,
        IndexIdeal::new(IdealKind::NubarType, Family::All),
    ]
}

/// Elements of `∏_{ℕ²} Z` separating the levels of [`strictness_levels`]:
/// a single point, the first row, the diagonal, and a cofinite rectangle.
pub fn strictness_witnesses() -> [PatternElement; 4] {
    let z = CanonicalGroup::free(1);
    let one = |r: SemilinearSet| PatternElement::constant(z.clone(), r, &[1]).expect("valid witness");
    [
        one(SemilinearSet::points([(1, 1)])),
        one(SemilinearSet::first_rows(1)),
        one(SemilinearSet::diagonal()),
        one(SemilinearSet::rect(AxisSet::Cofinite([1].into()), AxisSet::Cofinite([1].into()))),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictnessReport {
    /// `membership[w][l]`: witness `w` lies in level `l`.
    pub membership: Vec<[bool; 4]>,
    /// Each witness lies in its own level but not the one below, and
    /// membership is monotone along the chain.
    pub strict: bool,
}

pub fn check_strictness(witnesses: &[PatternElement]) -> Result<StrictnessReport, KDirectError> {
    let levels = strictness_levels();
    let mut membership = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let mut row = [false; 4];
        for (l, ideal) in levels.iter().enumerate() {
            row[l] = in_kdirect_sum(w, ideal)?;
        }
        membership.push(row);
    }
    let strict = membership.len() == 4
        && membership.iter().enumerate().all(|(k, row)| {
            let first = row.iter().position(|&b| b);
            first == Some(k) && row[k..].iter().all(|&b| b)
        });
    Ok(StrictnessReport { membership, strict })
}

/// Sample for the exchange check: an element of `∏_m G_{m, f(m)}`, with the
/// index `m` running over the first row of `ℕ²`.
#[derive(Clone, Debug)]
pub struct ExchangeSample {
    pub levels: StepFunction,
    pub element: PatternElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExchangeReport {
    pub samples: usize,
    /// Indices `m ≤ window` examined per sample.
    pub window: u64,
    /// Representatives of one class at different level functions have equal images.
    pub well_defined: bool,
    /// Equal images always came from elements that agree at some common level function.
    pub injective: bool,
    /// Inverse images found via `h ≥ max(f, g)` agreed with the original samples.
    pub inverse_recovered: bool,
    /// Largest `k` with `h = max(f, g) + k` needed.
    pub max_shift: usize,
    pub failures: Vec<String>,
}

impl ExchangeReport {
    pub fn passed(&self) -> bool {
        self.well_defined && self.injective && self.inverse_recovered && self.failures.is_empty()
    }
}

struct Exchange<'a> {
    tower: &'a GroupTower,
    calc: ColimCalculus,
    bound: usize,
    window: u64,
}

impl Exchange<'_> {
    fn value(&self, f: &StepFunction, x: &PatternElement, m: u64) -> (usize, Vec<BigInt>) {
        (f.eval(m) as usize, x.value_at(m, 1))
    }

    fn push(&self, v: &[BigInt], from: usize, to: usize) -> Vec<BigInt> {
        let pushed = self.tower.push(v, from, to).expect("supported tail");
        self.tower.level(to).expect("supported tail").reduce(&pushed)
    }

    /// Least `k ≤ bound` with both sequences agreeing at `max(f, g) + k` at every index.
    fn common_level(
        &self,
        (f, x): (&StepFunction, &PatternElement),
        (g, y): (&StepFunction, &PatternElement),
    ) -> Result<usize, KDirectError> {
        let top = f.max(g);
        let mut worst = 0;
        for m in 1..=self.window {
            let (lf, vx) = self.value(f, x, m);
            let (lg, vy) = self.value(g, y, m);
            let base = top.eval(m) as usize;
            let k = (0..=self.bound)
                .find(|&k| self.push(&vx, lf, base + k) == self.push(&vy, lg, base + k))
                .ok_or(KDirectError::LevelSearchExhausted { index: m, bound: self.bound })?;
            worst = worst.max(k);
        }
        // a single shift must serve every index at once
        for m in 1..=self.window {
            let (lf, vx) = self.value(f, x, m);
            let (lg, vy) = self.value(g, y, m);
            let h = top.eval(m) as usize + worst;
            if self.push(&vx, lf, h) != self.push(&vy, lg, h) {
                return Err(KDirectError::LevelSearchExhausted { index: m, bound: self.bound });
            }
        }
        Ok(worst)
    }

    fn same_image(&self, (f, x): (&StepFunction, &PatternElement), (g, y): (&StepFunction, &PatternElement)) -> bool {
        (1..=self.window).all(|m| {
            let (lf, vx) = self.value(f, x, m);
            let (lg, vy) = self.value(g, y, m);
            self.calc.equal(&self.calc.element(lf, vx), &self.calc.element(lg, vy))
        })
    }
}

/// Checks, over indices `m ≤ window`, that sending the class of a sequence
/// `(x_m ∈ G_{m, f(m)})` to the sequence of classes in `colim_n G_{m,n}` is
/// well defined and injective, and that the inverse built from a common
/// level `h ≥ max(f, g)` recovers each sample.
pub fn exchange_iso_check<R: Rng>(
    tower: &GroupTower,
    samples: &[ExchangeSample],
    window: u64,
    rng: &mut R,
) -> Result<ExchangeReport, KDirectError> {
    if tower.direction() != Direction::Direct {
        return Err(TowerError::WrongDirection.into());
    }
    let g0 = tower.level(0).ok_or(KDirectError::ColimUnavailable)?.clone();
    if tower.stored_levels().iter().any(|l| *l != g0) {
        return Err(KDirectError::NonUniformTower);
    }
    let calc = tower_colim(tower, true)?.calculus.ok_or(KDirectError::ColimUnavailable)?;
    let (_, period) = tower.tail().block().ok_or(KDirectError::ColimUnavailable)?;
    let ex = Exchange { tower, bound: calc.settle() + period, calc, window };
    let mut report = ExchangeReport { samples: samples.len(), window, well_defined: true, injective: true, inverse_recovered: true, ..Default::default() };

    for (n, s) in samples.iter().enumerate() {
        if s.element.group() != &g0 {
            return Err(KDirectError::GroupMismatch);
        }
        let f = &s.levels;
        let x = &s.element;
        // another representative of the same classes, at g = f + shift,
        // perturbed by elements that die further up
        let shift = rng.gen_range(1..=3u64);
        let g = f.plus(shift);
        let mut pieces = Vec::new();
        for m in 1..=window {
            let (lf, vx) = ex.value(f, x, m);
            let lg = g.eval(m) as usize;
            let mut v = ex.push(&vx, lf, lg);
            let noise: Vec<BigInt> = (0..g0.generators()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
            if ex.push(&noise, lg, lg + ex.bound).iter().all(Zero::is_zero) {
                v = v.iter().zip(&noise).map(|(a, b)| a + b).collect();
            }
            pieces.push((SemilinearSet::points([(m, 1)]), v));
        }
        let y = PatternElement::new(g0.clone(), pieces)?;
        if !ex.same_image((f, x), (&g, &y)) {
            report.well_defined = false;
            report.failures.push(format!("sample {n}: representatives at f and f+{shift} have different images"));
        }
        match ex.common_level((f, x), (&g, &y)) {
            Ok(k) => report.max_shift = report.max_shift.max(k),
            Err(e) => {
                report.inverse_recovered = false;
                report.failures.push(format!("sample {n}: {e}"));
            }
        }
        // perturb one index and compare images against common levels
        let m0 = rng.gen_range(1..=window);
        let delta: Vec<BigInt> = (0..g0.generators()).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        let bumped = x.add(&PatternElement::new(g0.clone(), vec![(SemilinearSet::points([(m0, 1)]), delta)])?)?;
        let equal_images = ex.same_image((f, x), (f, &bumped));
        let common = ex.common_level((f, x), (f, &bumped)).is_ok();
        if equal_images != common {
            report.injective = false;
            report.failures.push(format!("sample {n}: images equal = {equal_images}, common level found = {common}"));
        }
    }
    Ok(report)
}

/// Random samples for [`exchange_iso_check`]: values on a few points of the
/// first row and a constant value on the rest of it.
pub fn random_exchange_samples<R: Rng>(tower: &GroupTower, rng: &mut R, count: usize) -> Vec<ExchangeSample> {
    let g = tower.level(0).expect("level zero").clone();
    (0..count)
        .map(|_| {
            let pts: std::collections::BTreeSet<u64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..=12)).collect();
            let mut value = || (0..g.generators()).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect::<Vec<_>>();
            let mut pieces: Vec<(SemilinearSet, Vec<BigInt>)> =
                pts.iter().map(|&m| (SemilinearSet::points([(m, 1)]), value())).collect();
            pieces.push((SemilinearSet::rect(AxisSet::Cofinite(pts.clone()), AxisSet::up_to(1)), value()));
            let element = PatternElement::new(g.clone(), pieces).expect("disjoint pieces");
            let mut levels = random_step(rng);
            levels.table.iter_mut().for_each(|v| *v %= 6);
            ExchangeSample { levels, element }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z() -> CanonicalGroup {
        CanonicalGroup::free(1)
    }

    #[test]
    fn supports() {
        assert!(PatternElement::zero(z()).support().is_empty().unwrap());
        let strip = SemilinearSet::first_rows(2);
        let g = PatternElement::constant(z(), strip.clone(), &[1]).unwrap();
        assert!(g.support().same_set(&strip).unwrap());
        let f = StepFunction::linear(2, 1);
        let a = PatternElement::constant(z(), SemilinearSet::under_rows(f.clone()), &[1]).unwrap();
        let b = PatternElement::constant(z(), SemilinearSet::under_rows(f), &[-1]).unwrap();
        assert!(a.add(&b).unwrap().support().is_empty().unwrap());
    }

    #[test]
    fn overlapping_regions_are_rejected() {
        let r = PatternElement::new(
            z(),
            vec![(SemilinearSet::first_rows(2), vec![1.into()]), (SemilinearSet::points([(5, 2)]), vec![1.into()])],
        );
        assert_eq!(r, Err(KDirectError::Overlap(0, 1)));
    }

    #[test]
    fn kdirect_membership() {
        let pair = PairedIdeals::horizontal();
        let strip = PatternElement::constant(z(), SemilinearSet::first_rows(2), &[1]).unwrap();
        assert!(in_kdirect_sum(&strip, &pair.kappa).unwrap());
        let diag = PatternElement::constant(z(), SemilinearSet::diagonal(), &[1]).unwrap();
        assert!(!in_kdirect_sum(&diag, &pair.kappa).unwrap());
        assert!(in_kdirect_sum(&diag, &pair.nubar).unwrap());
        let point = PatternElement::constant(z(), SemilinearSet::points([(4, 4)]), &[3]).unwrap();
        for ideal in strictness_levels() {
            assert!(in_kdirect_sum(&point, &ideal).unwrap());
        }
    }

    #[test]
    fn chi_agrees_on_examples() {
        let pair = PairedIdeals::horizontal();
        for w in strictness_witnesses() {
            assert!(chi_check(&w, &pair).unwrap().agrees());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            assert!(chi_check(&random_pattern(&mut rng, &pair), &pair).unwrap().agrees());
        }
    }

    #[test]
    fn witnesses_are_strict() {
        let r = check_strictness(&strictness_witnesses()).unwrap();
        assert!(r.strict, "{:?}", r.membership);
    }

    #[test]
    fn exchange_on_identity_towers() {
        let t = GroupTower::constant(z(), Direction::Direct);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples = random_exchange_samples(&t, &mut rng, 10);
        let r = exchange_iso_check(&t, &samples, 12, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.max_shift, 0);
    }

    #[test]
    fn exchange_on_doubling_towers() {
        let t = GroupTower::multiplication(2, Direction::Direct);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples = random_exchange_samples(&t, &mut rng, 20);
        let r = exchange_iso_check(&t, &samples, 12, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn exchange_with_dying_classes() {
        let g = CanonicalGroup::cyclic(4);
        let b = crate::algebra::GroupMap::scalar(&g, 2);
        let t = GroupTower::new(
            vec![g.clone(), g],
            vec![b],
            crate::algebra::TailPolicy::EventuallyPeriodic { from: 0, period: 1 },
            Direction::Direct,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let samples = random_exchange_samples(&t, &mut rng, 20);
        let r = exchange_iso_check(&t, &samples, 10, &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.max_shift > 0);
    }
}
