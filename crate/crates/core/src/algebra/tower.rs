//! Towers of finitely generated abelian groups and their (derived) limits.
//!
//! Only two infinite tails are representable: eventually constant (identity
//! bondings) and eventually periodic. For a periodic tail the whole tower is
//! governed by one endomorphism `E` of the repeating level, the composite of
//! the bondings over one period. `lim`, `lim¹` and `colim` are decided exactly
//! when `E` is block diagonal with a monomial free block (identity, zero,
//! multiplication by an integer, permutations of summands) and an arbitrary
//! torsion block; anything else is reported as unsupported.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::{AlgebraError, CanonicalGroup, GroupMap};
use super::lattice::{Presentation, SubLattice};
use super::matrix::IntMatrix;

/// How a finite list of levels continues to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailPolicy {
    /// Nothing is known past the stored levels.
    TruncatedUnknown,
    /// Levels from `from` on are equal and bonded by identities.
    EventuallyConstant { from: usize },
    /// Levels and bondings repeat with the given period from `from` on.
    EventuallyPeriodic { from: usize, period: usize },
}

impl TailPolicy {
    /// `(start, period)` of the repeating block, if any.
    pub fn block(&self) -> Option<(usize, usize)> {
        match *self {
            TailPolicy::TruncatedUnknown => None,
            TailPolicy::EventuallyConstant { from } => Some((from, 1)),
            TailPolicy::EventuallyPeriodic { from, period } => Some((from, period)),
        }
    }

    /// Index of the stored level that level `k` repeats.
    pub fn fold(&self, k: usize) -> usize {
        match self.block() {
            Some((from, period)) if k >= from => from + (k - from) % period,
            _ => k,
        }
    }

    /// Number of stored levels required to describe the tail.
    pub fn required_levels(&self) -> usize {
        match *self {
            TailPolicy::TruncatedUnknown => 1,
            TailPolicy::EventuallyConstant { from } => from + 1,
            TailPolicy::EventuallyPeriodic { from, period } => from + period + 1,
        }
    }
}

/// Which way the bondings point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `bondings[i] : G_{i+1} → G_i`.
    Inverse,
    /// `bondings[i] : G_i → G_{i+1}`.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("tower needs {needed} stored levels, has {have}")]
    TooShort { needed: usize, have: usize },
    #[error("bonding {index} does not connect the adjacent levels")]
    BadBonding { index: usize },
    #[error("tail policy is contradicted by stored level or bonding {index}")]
    TailMismatch { index: usize },
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("bonding outside the supported class: {0}")]
    UnsupportedBonding(String),
    #[error("tower direction does not match the requested limit")]
    WrongDirection,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A sequence of groups with bondings between consecutive levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTower {
    levels: Vec<CanonicalGroup>,
    bondings: Vec<GroupMap>,
    tail: TailPolicy,
    direction: Direction,
}

impl GroupTower {
    pub fn new(
        levels: Vec<CanonicalGroup>,
        bondings: Vec<GroupMap>,
        tail: TailPolicy,
        direction: Direction,
    ) -> Result<Self, TowerError> {
        if let TailPolicy::EventuallyPeriodic { period: 0, .. } = tail {
            return Err(TowerError::ZeroPeriod);
        }
        let needed = tail.required_levels().max(1);
        if levels.len() < needed {
            return Err(TowerError::TooShort { needed, have: levels.len() });
        }
        if bondings.len() + 1 != levels.len() {
            return Err(TowerError::TooShort { needed: levels.len() - 1, have: bondings.len() });
        }
        for (i, b) in bondings.iter().enumerate() {
            let (s, t) = match direction {
                Direction::Inverse => (&levels[i + 1], &levels[i]),
                Direction::Direct => (&levels[i], &levels[i + 1]),
            };
            if &b.source != s || &b.target != t {
                return Err(TowerError::BadBonding { index: i });
            }
        }
        match tail {
            TailPolicy::TruncatedUnknown => {}
            TailPolicy::EventuallyConstant { from } => {
                for i in from..levels.len() {
                    if levels[i] != levels[from] {
                        return Err(TowerError::TailMismatch { index: i });
                    }
                }
                for (i, b) in bondings.iter().enumerate().skip(from) {
                    if *b != GroupMap::identity(&levels[from]) {
                        return Err(TowerError::TailMismatch { index: i });
                    }
                }
            }
            TailPolicy::EventuallyPeriodic { from, period } => {
                for i in from..levels.len() {
                    if i + period < levels.len() && levels[i + period] != levels[i] {
                        return Err(TowerError::TailMismatch { index: i + period });
                    }
                    if i + period < bondings.len() && bondings[i + period] != bondings[i] {
                        return Err(TowerError::TailMismatch { index: i + period });
                    }
                }
            }
        }
        Ok(GroupTower { levels, bondings, tail, direction })
    }

    /// Constant tower of `g` with identity bondings.
    pub fn constant(g: CanonicalGroup, direction: Direction) -> Self {
        let id = GroupMap::identity(&g);
        GroupTower::new(vec![g.clone(), g], vec![id], TailPolicy::EventuallyConstant { from: 0 }, direction)
            .expect("constant tower is valid")
    }

    /// `Z ← Z ← …` (or `→` when direct) with every bonding multiplication by `m`.
    pub fn multiplication(m: i64, direction: Direction) -> Self {
        let z = CanonicalGroup::free(1);
        let b = GroupMap::scalar(&z, m);
        GroupTower::new(vec![z.clone(), z], vec![b], TailPolicy::EventuallyPeriodic { from: 0, period: 1 }, direction)
            .expect("multiplication tower is valid")
    }

    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn stored_levels(&self) -> &[CanonicalGroup] {
        &self.levels
    }

    pub fn stored_bondings(&self) -> &[GroupMap] {
        &self.bondings
    }

    /// Level `k`, synthesized from the tail when `k` is past the stored data.
    pub fn level(&self, k: usize) -> Option<&CanonicalGroup> {
        if k < self.levels.len() {
            return Some(&self.levels[k]);
        }
        match self.tail {
            TailPolicy::TruncatedUnknown => None,
            _ => Some(&self.levels[self.tail.fold(k)]),
        }
    }

    /// The bonding between levels `k` and `k+1`.
    pub fn bonding(&self, k: usize) -> Option<GroupMap> {
        if k < self.bondings.len() {
            return Some(self.bondings[k].clone());
        }
        match self.tail {
            TailPolicy::TruncatedUnknown => None,
            TailPolicy::EventuallyConstant { from } => Some(GroupMap::identity(&self.levels[from])),
            TailPolicy::EventuallyPeriodic { .. } => Some(self.bondings[self.tail.fold(k)].clone()),
        }
    }

    /// Composite of the bondings over one period of the tail, an endomorphism
    /// of the first repeating level.
    pub fn period_endomorphism(&self) -> Option<GroupMap> {
        let (from, period) = self.tail.block()?;
        let g = self.levels[from].clone();
        let mut acc = GroupMap::identity(&g);
        for k in from..from + period {
            let b = self.bonding(k)?;
            acc = match self.direction {
                // G_from ← G_{from+1} ← … ← G_{from+period}
                Direction::Inverse => acc.compose(&b).ok()?,
                Direction::Direct => b.compose(&acc).ok()?,
            };
        }
        Some(acc)
    }

    /// Push an element of level `from` up to level `to` along a direct tower.
    pub fn push(&self, x: &[BigInt], from: usize, to: usize) -> Option<Vec<BigInt>> {
        assert_eq!(self.direction, Direction::Direct, "push needs a direct tower");
        let mut v = x.to_vec();
        for k in from..to {
            v = self.bonding(k)?.apply(&v);
        }
        Some(v)
    }
}

/// Value of a (co)homology group that may fail to be finitely generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupResult {
    Exact(CanonicalGroup),
    /// `lim¹` of multiplication by `m` on `Z`: the `m`-adic integers modulo `Z`.
    /// `m` is stored as its radical, since only its prime divisors matter.
    AdicQuotient { m: BigInt, tower: Arc<GroupTower> },
    CountableProduct { factor: CanonicalGroup },
    /// `base ⊗ Z[1/m]`, `m` again reduced to its radical.
    Localization { base: CanonicalGroup, m: BigInt, tower: Arc<GroupTower> },
    SymbolicNonzero { description: String, tower: Option<Arc<GroupTower>> },
    /// Nothing can be decided; the groups of the stored levels are attached.
    Undetermined { levels: Vec<CanonicalGroup>, reason: String },
    /// A finite direct sum of the other kinds.
    DirectSum(Vec<GroupResult>),
}

impl GroupResult {
    pub fn zero() -> Self {
        GroupResult::Exact(CanonicalGroup::zero())
    }

    pub fn as_exact(&self) -> Option<&CanonicalGroup> {
        match self {
            GroupResult::Exact(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupResult::Exact(g) if g.is_zero())
    }

    pub fn is_undetermined(&self) -> bool {
        match self {
            GroupResult::Undetermined { .. } => true,
            GroupResult::DirectSum(parts) => parts.iter().any(|p| p.is_undetermined()),
            _ => false,
        }
    }

    /// Direct sum with exact parts merged and zero parts dropped.
    pub fn sum(parts: Vec<GroupResult>) -> GroupResult {
        let mut exact = CanonicalGroup::zero();
        let mut rest = Vec::new();
        for p in parts {
            match p {
                GroupResult::Exact(g) => exact = exact.direct_sum(&g),
                GroupResult::DirectSum(inner) => {
                    for q in inner {
                        match q {
                            GroupResult::Exact(g) => exact = exact.direct_sum(&g),
                            other => rest.push(other),
                        }
                    }
                }
                other => rest.push(other),
            }
        }
        if rest.is_empty() {
            return GroupResult::Exact(exact);
        }
        if !exact.is_zero() {
            rest.insert(0, GroupResult::Exact(exact));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            GroupResult::DirectSum(rest)
        }
    }

    /// Short tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            GroupResult::Exact(_) => "exact",
            GroupResult::AdicQuotient { .. } => "adic_quotient",
            GroupResult::CountableProduct { .. } => "countable_product",
            GroupResult::Localization { .. } => "localization",
            GroupResult::SymbolicNonzero { .. } => "symbolic_nonzero",
            GroupResult::Undetermined { .. } => "undetermined",
            GroupResult::DirectSum(_) => "direct_sum",
        }
    }
}

impl fmt::Display for GroupResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupResult::Exact(g) => write!(f, "{g}"),
            GroupResult::AdicQuotient { m, .. } => write!(f, "AdicQuotient({m})"),
            GroupResult::CountableProduct { factor } => write!(f, "prod({factor})"),
            GroupResult::Localization { base, m, .. } => match base.rank() {
                1 => write!(f, "Z[1/{m}]"),
                r => write!(f, "Z[1/{m}]^{r}"),
            },
            GroupResult::SymbolicNonzero { description, .. } => write!(f, "{description}"),
            GroupResult::Undetermined { levels, .. } => {
                let l: Vec<String> = levels.iter().map(|g| g.to_string()).collect();
                write!(f, "undetermined[{}]", l.join(", "))
            }
            GroupResult::DirectSum(parts) => {
                let p: Vec<String> = parts.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", p.join(" + "))
            }
        }
    }
}

/// Product of the distinct primes dividing `m` (`m ≥ 1`).
pub fn radical(m: &BigInt) -> BigInt {
    let mut n = m.abs();
    let mut r = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            r *= &p;
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        r *= n;
    }
    r
}

/// One cycle of the monomial free block: the summands it permutes and the
/// product of the scalars met around it.
#[derive(Clone, Debug)]
struct Cycle {
    length: usize,
    scalar: BigInt,
}

/// Structure of a supported endomorphism.
#[derive(Clone, Debug)]
struct Decomposition {
    cycles: Vec<Cycle>,
    /// Eventual image of the torsion block, as a group.
    torsion_core: CanonicalGroup,
}

fn decompose(e: &GroupMap) -> Result<Decomposition, TowerError> {
    let g = &e.source;
    let r = g.rank();
    let n = g.generators();
    let m = e.matrix();
    // free → torsion entries would couple the blocks
    for i in r..n {
        for j in 0..r {
            if !m.get(i, j).is_zero() {
                return Err(TowerError::UnsupportedBonding(format!(
                    "free generator {j} maps into torsion generator {i}"
                )));
            }
        }
    }
    let mut image_of = vec![None; r];
    let mut row_used = vec![false; r];
    for j in 0..r {
        let nz: Vec<(usize, BigInt)> = (0..r).filter_map(|i| {
            let v = m.get(i, j);
            (!v.is_zero()).then_some((i, v))
        }).collect();
        match nz.len() {
            0 => {}
            1 => {
                let (i, v) = nz.into_iter().next().unwrap();
                if row_used[i] {
                    return Err(TowerError::UnsupportedBonding(format!("free row {i} receives two summands")));
                }
                row_used[i] = true;
                image_of[j] = Some((i, v));
            }
            _ => {
                return Err(TowerError::UnsupportedBonding(format!(
                    "free generator {j} maps to a combination of summands"
                )))
            }
        }
    }
    // injective partial map on summands: cycles and chains ending in zero
    let mut seen = vec![false; r];
    let mut cycles = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut path = vec![start];
        let mut scalar = BigInt::one();
        let mut cur = start;
        let mut closed = false;
        while let Some((next, v)) = &image_of[cur] {
            scalar *= v;
            if *next == start {
                closed = true;
                break;
            }
            if path.contains(next) {
                break;
            }
            path.push(*next);
            cur = *next;
        }
        if closed {
            for &p in &path {
                seen[p] = true;
            }
            cycles.push(Cycle { length: path.len(), scalar });
        }
    }
    // torsion block: iterate images until the subgroup stabilizes
    let t = n - r;
    let tmod: Vec<BigInt> = (r..n).map(|k| g.modulus(k)).collect();
    let rel: Vec<Vec<BigInt>> = (0..t)
        .map(|k| {
            let mut v = vec![BigInt::zero(); t];
            v[k] = tmod[k].clone();
            v
        })
        .collect();
    let block = m.select(&(r..n).collect::<Vec<_>>(), &(r..n).collect::<Vec<_>>());
    let mut gens: Vec<Vec<BigInt>> = IntMatrix::identity(t).to_rows();
    let mut current = SubLattice::span(&[gens.clone(), rel.clone()].concat(), t);
    loop {
        gens = gens.iter().map(|v| reduce_mod(&block.mul_vec(v), &tmod)).collect();
        let next = SubLattice::span(&[gens.clone(), rel.clone()].concat(), t);
        if next.same_as(&current) {
            break;
        }
        current = next;
    }
    let core = Presentation::new(current, &rel).map_err(|_| AlgebraError::IllDefined { generator: r })?;
    Ok(Decomposition { cycles, torsion_core: core.group })
}

fn reduce_mod(v: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(m).map(|(x, d)| x.mod_floor(d)).collect()
}

fn undetermined(t: &GroupTower, reason: &str) -> GroupResult {
    GroupResult::Undetermined { levels: t.levels.clone(), reason: reason.to_string() }
}

/// Inverse limit of an inverse tower.
pub fn tower_lim(t: &GroupTower) -> Result<GroupResult, TowerError> {
    if t.direction != Direction::Inverse {
        return Err(TowerError::WrongDirection);
    }
    match t.tail {
        TailPolicy::TruncatedUnknown => Ok(undetermined(t, "tail unknown past the stored levels")),
        TailPolicy::EventuallyConstant { from } => Ok(GroupResult::Exact(t.levels[from].clone())),
        TailPolicy::EventuallyPeriodic { .. } => {
            let d = decompose(&t.period_endomorphism().expect("periodic tail has an endomorphism"))?;
            let units: usize = d.cycles.iter().filter(|c| c.scalar.abs().is_one()).map(|c| c.length).sum();
            Ok(GroupResult::Exact(CanonicalGroup::free(units).direct_sum(&d.torsion_core)))
        }
    }
}

/// First derived limit of an inverse tower.
pub fn tower_lim1(t: &GroupTower) -> Result<GroupResult, TowerError> {
    if t.direction != Direction::Inverse {
        return Err(TowerError::WrongDirection);
    }
    match t.tail {
        TailPolicy::TruncatedUnknown => Ok(undetermined(t, "tail unknown past the stored levels")),
        TailPolicy::EventuallyConstant { .. } => Ok(GroupResult::zero()),
        TailPolicy::EventuallyPeriodic { .. } => {
            let d = decompose(&t.period_endomorphism().expect("periodic tail has an endomorphism"))?;
            let shared = Arc::new(t.clone());
            let mut parts = Vec::new();
            for c in &d.cycles {
                if c.scalar.abs() > BigInt::one() {
                    for _ in 0..c.length {
                        parts.push(GroupResult::AdicQuotient { m: radical(&c.scalar), tower: shared.clone() });
                    }
                }
            }
            Ok(GroupResult::sum(parts))
        }
    }
}

/// Mittag-Leffler test: whether the images of the bondings stabilize.
/// `None` when the tail is unknown.
pub fn tower_images_stabilize(t: &GroupTower) -> Result<Option<bool>, TowerError> {
    match t.tail {
        TailPolicy::TruncatedUnknown => Ok(None),
        TailPolicy::EventuallyConstant { .. } => Ok(Some(true)),
        TailPolicy::EventuallyPeriodic { .. } => {
            let d = decompose(&t.period_endomorphism().expect("periodic tail has an endomorphism"))?;
            Ok(Some(d.cycles.iter().all(|c| c.scalar.abs().is_one())))
        }
    }
}

/// An element of a colimit, represented at a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimElement {
    pub level: usize,
    pub value: Vec<BigInt>,
}

/// Element calculus on the colimit of a direct tower.
#[derive(Clone, Debug)]
pub struct ColimCalculus {
    tower: Arc<GroupTower>,
    /// Levels past which pushing further never identifies new elements.
    settle: usize,
    rational_rank: usize,
}

impl ColimCalculus {
    pub fn tower(&self) -> &GroupTower {
        &self.tower
    }

    /// Class of `value ∈ G_level`.
    pub fn element(&self, level: usize, value: Vec<BigInt>) -> ColimElement {
        let g = self.tower.level(level).expect("level exists under a supported tail");
        ColimElement { level, value: g.reduce(&value) }
    }

    /// Class of `value` given as small integers.
    pub fn element_i64(&self, level: usize, value: &[i64]) -> ColimElement {
        self.element(level, value.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Representative of the same class at a higher level.
    pub fn push(&self, x: &ColimElement, to: usize) -> ColimElement {
        assert!(to >= x.level, "cannot push downwards");
        ColimElement { level: to, value: self.tower.push(&x.value, x.level, to).expect("supported tail") }
    }

    /// Level at which two representatives are compared.
    pub fn merge_level(&self, a: &ColimElement, b: &ColimElement) -> usize {
        a.level.max(b.level) + self.settle
    }

    pub fn equal(&self, a: &ColimElement, b: &ColimElement) -> bool {
        let h = self.merge_level(a, b);
        self.push(a, h).value == self.push(b, h).value
    }

    pub fn add(&self, a: &ColimElement, b: &ColimElement) -> ColimElement {
        let h = a.level.max(b.level);
        let (pa, pb) = (self.push(a, h), self.push(b, h));
        let v: Vec<BigInt> = pa.value.iter().zip(&pb.value).map(|(x, y)| x + y).collect();
        self.element(h, v)
    }

    pub fn rational_rank(&self) -> usize {
        self.rational_rank
    }

    /// Extra levels after which two representatives agree if they ever will.
    pub fn settle(&self) -> usize {
        self.settle
    }
}

/// Colimit of a direct tower, with its element calculus.
#[derive(Clone, Debug)]
pub struct ColimResult {
    pub group: GroupResult,
    pub calculus: Option<ColimCalculus>,
}

/// Colimit of a tower whose bondings point upwards (`reversed = true`).
pub fn tower_colim(t: &GroupTower, reversed: bool) -> Result<ColimResult, TowerError> {
    if !reversed || t.direction != Direction::Direct {
        return Err(TowerError::WrongDirection);
    }
    let (from, period) = match t.tail.block() {
        None => return Ok(ColimResult { group: undetermined(t, "tail unknown past the stored levels"), calculus: None }),
        Some(b) => b,
    };
    let e = t.period_endomorphism().expect("supported tail has an endomorphism");
    let d = decompose(&e)?;
    let shared = Arc::new(t.clone());
    let mut parts = vec![GroupResult::Exact(d.torsion_core.clone())];
    let mut rational_rank = 0;
    for c in &d.cycles {
        rational_rank += c.length;
        if c.scalar.abs().is_one() {
            parts.push(GroupResult::Exact(CanonicalGroup::free(c.length)));
        } else {
            parts.push(GroupResult::Localization {
                base: CanonicalGroup::free(c.length),
                m: radical(&c.scalar),
                tower: shared.clone(),
            });
        }
    }
    let group = merge_localizations(GroupResult::sum(parts));
    // exponent after which kernels of powers of `e` stop growing
    let mut power = e.clone();
    let mut j = 1usize;
    loop {
        let next = e.compose(&power)?;
        if kernel_of(&next).same_as(&kernel_of(&power)) {
            break;
        }
        power = next;
        j += 1;
    }
    let settle = from + period * (j + 2);
    Ok(ColimResult { group, calculus: Some(ColimCalculus { tower: shared, settle, rational_rank }) })
}

fn kernel_of(f: &GroupMap) -> SubLattice {
    let rel = IntMatrix::from_columns(&f.target.relations(), f.target.generators());
    let k = SubLattice::kernel(&f.matrix().hcat(&rel));
    let n = f.source.generators();
    let gens: Vec<Vec<BigInt>> = k.basis().iter().map(|v| v[..n].to_vec()).collect();
    let mut all = gens;
    all.extend(f.source.relations());
    SubLattice::span(&all, n)
}

/// Combines localizations at the same `m` into one summand of higher rank.
fn merge_localizations(g: GroupResult) -> GroupResult {
    let GroupResult::DirectSum(parts) = g else { return g };
    let mut out: Vec<GroupResult> = Vec::new();
    for p in parts {
        if let GroupResult::Localization { base, m, tower } = &p {
            if let Some(GroupResult::Localization { base: b2, .. }) = out
                .iter_mut()
                .find(|q| matches!(q, GroupResult::Localization { m: m2, .. } if m2 == m))
            {
                *b2 = b2.direct_sum(base);
                let _ = tower;
                continue;
            }
        }
        out.push(p);
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        GroupResult::DirectSum(out)
    }
}

/// Radical of `m` as a machine integer, when it fits.
pub fn radical_u64(m: &BigInt) -> Option<u64> {
    radical(m).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CanonicalGroup {
        CanonicalGroup::free(1)
    }

    #[test]
    fn constant_integers() {
        let t = GroupTower::constant(z(), Direction::Inverse);
        assert_eq!(tower_lim(&t).unwrap(), GroupResult::Exact(z()));
        assert!(tower_lim1(&t).unwrap().is_zero());
    }

    #[test]
    fn doubling_tower_has_zero_lim_and_adic_lim1() {
        let t = GroupTower::multiplication(2, Direction::Inverse);
        assert!(tower_lim(&t).unwrap().is_zero());
        match tower_lim1(&t).unwrap() {
            GroupResult::AdicQuotient { m, .. } => assert_eq!(m, BigInt::from(2)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(tower_images_stabilize(&t).unwrap(), Some(false));
    }

    #[test]
    fn zero_bondings_on_z2() {
        let g = CanonicalGroup::cyclic(2);
        let zero = GroupMap::zero(&g, &g);
        let t = GroupTower::new(vec![g.clone(), g], vec![zero], TailPolicy::EventuallyPeriodic { from: 0, period: 1 }, Direction::Inverse)
            .unwrap();
        assert!(tower_lim(&t).unwrap().is_zero());
        assert!(tower_lim1(&t).unwrap().is_zero());
    }

    #[test]
    fn dyadic_colimit() {
        let t = GroupTower::multiplication(2, Direction::Direct);
        let c = tower_colim(&t, true).unwrap();
        assert_eq!(c.group.to_string(), "Z[1/2]");
        let calc = c.calculus.unwrap();
        let a = calc.element_i64(3, &[1]);
        let b = calc.element_i64(4, &[2]);
        assert!(calc.equal(&a, &b));
        assert!(!calc.equal(&a, &calc.element_i64(4, &[1])));
        assert_eq!(calc.rational_rank(), 1);
    }

    #[test]
    fn unsupported_shear_is_rejected() {
        let g = CanonicalGroup::free(2);
        let shear = GroupMap::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])).unwrap();
        let t = GroupTower::new(vec![g.clone(), g], vec![shear], TailPolicy::EventuallyPeriodic { from: 0, period: 1 }, Direction::Inverse)
            .unwrap();
        assert!(matches!(tower_lim(&t), Err(TowerError::UnsupportedBonding(_))));
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(&BigInt::from(12)), BigInt::from(6));
        assert_eq!(radical(&BigInt::from(-8)), BigInt::from(2));
        assert_eq!(radical(&BigInt::from(1)), BigInt::from(1));
    }
}
