use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use super::{Tower, TowersError};
use crate::complexes::CellComplex;

/// Subcomplex of one level, optionally with an unmaterialized infinite
/// remainder. Cells of the remainder never occur in the stored complexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelSet {
    pub core: Vec<bool>,
    pub unbounded: bool,
}

impl LevelSet {
    pub fn empty(n: usize) -> Self {
        LevelSet { core: vec![false; n], unbounded: false }
    }

    pub fn full(n: usize) -> Self {
        LevelSet { core: vec![true; n], unbounded: false }
    }

    pub fn is_empty(&self) -> bool {
        !self.unbounded && !self.core.iter().any(|&b| b)
    }

    pub fn is_subset_of(&self, other: &LevelSet) -> bool {
        (!self.unbounded || other.unbounded) && self.core.iter().zip(&other.core).all(|(a, b)| !a || *b)
    }

    fn zip(&self, other: &LevelSet, f: impl Fn(bool, bool) -> bool) -> LevelSet {
        LevelSet {
            core: self.core.iter().zip(&other.core).map(|(a, b)| f(*a, *b)).collect(),
            unbounded: f(self.unbounded, other.unbounded),
        }
    }
}

/// Level-wise subcomplexes `Q_i ⊆ P_i` with each bonding carrying `Q_{i+1}` into `Q_i`.
///
/// Levels `from..from+period` repeat forever; the block is always aligned
/// with the periodic block of the tower.
#[derive(Clone, Debug)]
pub struct Restriction {
    tower: Arc<Tower>,
    levels: Vec<LevelSet>,
    from: usize,
    period: usize,
}

fn tower_block(tower: &Tower) -> Result<(usize, usize), TowersError> {
    tower.tail().block().ok_or(TowersError::UndecidableTail)
}

/// Smallest subcomplex containing the given cells.
fn close(k: &CellComplex, mut mask: Vec<bool>) -> Vec<bool> {
    let mut stack: Vec<usize> = (0..k.len()).filter(|&c| mask[c]).collect();
    while let Some(c) = stack.pop() {
        for f in k.faces(c) {
            if !mask[f] {
                mask[f] = true;
                stack.push(f);
            }
        }
    }
    mask
}

/// Smallest subcomplex of `P_level` containing the image of `mask ⊆ P_{level+1}`.
fn carrier(tower: &Tower, level: usize, mask: &[bool]) -> Vec<bool> {
    let b = tower.bonding(level).expect("supported tail");
    let target = tower.level(level).expect("supported tail");
    let mut out = vec![false; target.len()];
    for (c, &m) in mask.iter().enumerate() {
        if m {
            for (t, _) in b.image(c) {
                out[*t] = true;
            }
        }
    }
    close(target, out)
}

impl Restriction {
    /// Levels `0..from+period` given explicitly; later levels repeat the block.
    pub fn new(tower: Arc<Tower>, levels: Vec<LevelSet>, from: usize, period: usize) -> Result<Self, TowersError> {
        if period == 0 {
            return Err(TowersError::ZeroPeriod);
        }
        if levels.len() < from + period {
            return Err(TowersError::InvalidRestriction(format!(
                "{} levels given, the block needs {}",
                levels.len(),
                from + period
            )));
        }
        let (tf, tp) = tower_block(&tower)?;
        let fold = |k: usize| if k < from { k } else { from + (k - from) % period };
        let (f, p) = (from.max(tf), period.lcm(&tp));
        let levels: Vec<LevelSet> = (0..f + p).map(|k| levels[fold(k)].clone()).collect();
        let r = Restriction { tower, levels, from: f, period: p };
        r.check()?;
        Ok(r)
    }

    /// Cells listed by id per level (closed under faces automatically), then
    /// the last listed level repeated forever.
    pub fn from_ids(tower: Arc<Tower>, ids: &[Vec<&str>]) -> Result<Self, TowersError> {
        let mut levels = Vec::with_capacity(ids.len());
        for (i, list) in ids.iter().enumerate() {
            let k = tower.level(i).ok_or(TowersError::UndecidableTail)?;
            let mut mask = vec![false; k.len()];
            for id in list {
                let c = k.lookup(id).ok_or_else(|| TowersError::InvalidRestriction(format!("unknown cell {id} at level {i}")))?;
                mask[c] = true;
            }
            levels.push(LevelSet { core: close(k, mask), unbounded: false });
        }
        let (tf, tp) = tower_block(&tower)?;
        let last = levels.last().cloned().ok_or_else(|| TowersError::InvalidRestriction("no levels".into()))?;
        let from = levels.len().max(tf);
        let total = from + tp;
        let mut all = levels;
        while all.len() < total {
            let k = all.len();
            let n = tower.level(k).expect("supported tail").len();
            all.push(if last.core.len() == n { LevelSet { core: last.core.clone(), unbounded: false } } else { LevelSet::empty(n) });
        }
        Restriction::new(tower, all, from, tp)
    }

    pub fn full(tower: Arc<Tower>) -> Result<Self, TowersError> {
        let (f, p) = tower_block(&tower)?;
        let levels = (0..f + p).map(|k| LevelSet::full(tower.level(k).unwrap().len())).collect();
        Restriction::new(tower, levels, f, p)
    }

    pub fn empty(tower: Arc<Tower>) -> Result<Self, TowersError> {
        let (f, p) = tower_block(&tower)?;
        let levels = (0..f + p).map(|k| LevelSet::empty(tower.level(k).unwrap().len())).collect();
        Restriction::new(tower, levels, f, p)
    }

    /// The given levels followed by empty levels forever.
    pub fn then_empty(tower: Arc<Tower>, prefix: Vec<LevelSet>) -> Result<Self, TowersError> {
        let (tf, tp) = tower_block(&tower)?;
        let from = prefix.len().max(tf);
        let mut levels = prefix;
        while levels.len() < from + tp {
            let n = tower.level(levels.len()).unwrap().len();
            levels.push(LevelSet::empty(n));
        }
        Restriction::new(tower, levels, from, tp)
    }

    fn check(&self) -> Result<(), TowersError> {
        let total = self.from + self.period;
        for k in 0..total {
            let n = self.tower.level(k).expect("supported tail").len();
            if self.levels[k].core.len() != n {
                return Err(TowersError::InvalidRestriction(format!("level {k} has the wrong number of cells")));
            }
            let k_complex = self.tower.level(k).unwrap();
            if close(k_complex, self.levels[k].core.clone()) != self.levels[k].core {
                return Err(TowersError::InvalidRestriction(format!("level {k} is not closed under faces")));
            }
            if self.levels[k].unbounded {
                if k >= self.from {
                    return Err(TowersError::InvalidRestriction(format!(
                        "level {k} is unbounded inside the repeating block"
                    )));
                }
                if k > 0 && !self.levels[k - 1].unbounded {
                    return Err(TowersError::InvalidRestriction(format!(
                        "level {k} is unbounded but level {} is not",
                        k - 1
                    )));
                }
            }
        }
        for k in 0..total {
            let upper = self.level(k + 1);
            let c = carrier(&self.tower, k, &upper.core);
            if !c.iter().zip(&self.levels[k].core).all(|(a, b)| !a || *b) {
                return Err(TowersError::InvalidRestriction(format!("level {} does not map into level {k}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// `(from, period)` of the repeating block.
    pub fn block(&self) -> (usize, usize) {
        (self.from, self.period)
    }

    pub fn level(&self, k: usize) -> &LevelSet {
        let i = if k < self.from { k } else { self.from + (k - self.from) % self.period };
        &self.levels[i]
    }

    /// Levels `0..from+period`.
    pub fn stored_levels(&self) -> &[LevelSet] {
        &self.levels
    }

    fn aligned(&self, other: &Restriction) -> (usize, usize) {
        (self.from.max(other.from), self.period.lcm(&other.period))
    }

    fn combine(&self, other: &Restriction, f: impl Fn(&LevelSet, &LevelSet) -> LevelSet) -> Restriction {
        let (from, period) = self.aligned(other);
        let levels = (0..from + period).map(|k| f(self.level(k), other.level(k))).collect();
        Restriction::new(self.tower.clone(), levels, from, period).expect("unions and intersections of restrictions are restrictions")
    }

    pub fn intersection(&self, other: &Restriction) -> Restriction {
        self.combine(other, |a, b| a.zip(b, |x, y| x && y))
    }

    pub fn union(&self, other: &Restriction) -> Restriction {
        self.combine(other, |a, b| a.zip(b, |x, y| x || y))
    }

    pub fn is_subset_of(&self, other: &Restriction) -> bool {
        let (from, period) = self.aligned(other);
        (0..from + period).all(|k| self.level(k).is_subset_of(other.level(k)))
    }

    /// Random valid restriction. `unbounded_below` levels (counted from zero)
    /// carry an infinite remainder; with `empty_from = Some(e)` every level
    /// from `e` on is empty.
    pub fn random<R: Rng>(
        tower: Arc<Tower>,
        rng: &mut R,
        density: f64,
        unbounded_below: usize,
        empty_from: Option<usize>,
    ) -> Result<Self, TowersError> {
        let (tf, tp) = tower_block(&tower)?;
        let from = (tf + rng.gen_range(0..=2)).max(unbounded_below).max(empty_from.unwrap_or(0));
        let period = tp * rng.gen_range(1..=2usize);
        let total = from + period;
        let mut masks: Vec<Vec<bool>> = (0..total)
            .map(|k| {
                let l = tower.level(k).unwrap();
                let seeds = (0..l.len()).map(|_| rng.gen_bool(density)).collect();
                close(l, seeds)
            })
            .collect();
        if let Some(e) = empty_from {
            for m in masks.iter_mut().skip(e) {
                m.iter_mut().for_each(|b| *b = false);
            }
        }
        saturate(&tower, &mut masks, from);
        let levels = masks
            .into_iter()
            .enumerate()
            .map(|(k, core)| LevelSet { core, unbounded: k < unbounded_below && empty_from.is_none_or(|e| k < e) })
            .collect();
        Restriction::new(tower, levels, from, period)
    }

    /// Random sub-restriction.
    pub fn random_sub<R: Rng>(&self, rng: &mut R, density: f64) -> Restriction {
        let total = self.from + self.period;
        let mut masks: Vec<Vec<bool>> = (0..total)
            .map(|k| {
                let l = self.tower.level(k).unwrap();
                let seeds = self.levels[k].core.iter().map(|&b| b && rng.gen_bool(density)).collect();
                close(l, seeds)
            })
            .collect();
        saturate(&self.tower, &mut masks, self.from);
        let keep_unbounded = rng.gen_range(0..=self.from);
        let levels = masks
            .into_iter()
            .enumerate()
            .map(|(k, core)| LevelSet { core, unbounded: self.levels[k].unbounded && k < keep_unbounded })
            .collect();
        Restriction::new(self.tower.clone(), levels, self.from, self.period).expect("saturated sub-restriction is valid")
    }
}

/// Grows each level by the carrier of the level above until stable; the
/// level after the block is the first block level.
fn saturate(tower: &Tower, masks: &mut [Vec<bool>], from: usize) {
    let total = masks.len();
    loop {
        let mut changed = false;
        for k in (0..total).rev() {
            let above = if k + 1 < total { k + 1 } else { from };
            let c = carrier(tower, k, &masks[above]);
            for (m, x) in masks[k].iter_mut().zip(c) {
                if x && !*m {
                    *m = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Eventually periodic sequence of vertices `v_i ∈ Q_i` with `p_i(v_{i+1}) = v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thread {
    /// `v_0 … v_{cycle_start+cycle_len-1}` as cell indices.
    pub vertices: Vec<usize>,
    pub cycle_start: usize,
    pub cycle_len: usize,
}

impl Thread {
    pub fn vertex(&self, k: usize) -> usize {
        if k < self.vertices.len() {
            self.vertices[k]
        } else {
            self.vertices[self.cycle_start + (k - self.cycle_start) % self.cycle_len]
        }
    }

    /// The restriction `{v_i}` of the tower.
    pub fn as_restriction(&self, tower: Arc<Tower>) -> Restriction {
        let total = self.cycle_start + self.cycle_len;
        let levels = (0..total)
            .map(|k| {
                let mut l = LevelSet::empty(tower.level(k).unwrap().len());
                l.core[self.vertex(k)] = true;
                l
            })
            .collect();
        Restriction::new(tower, levels, self.cycle_start, self.cycle_len).expect("a thread is a restriction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    /// Every level is empty, so the restriction lies in every family.
    Both,
    /// Nonempty, finite at every level and eventually empty.
    InPhi,
    InKappaPrime,
    InNubarPrime,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Every level is a finite subcomplex.
    pub kappa_prime: bool,
    /// The inverse limit is empty.
    pub nubar_prime: bool,
    /// Finite at every level and empty from some level on.
    pub phi: bool,
    pub thread: Option<Thread>,
    pub infinite_level: Option<usize>,
    pub empty_from: Option<usize>,
}

pub fn classify_restriction(r: &Restriction) -> Result<Classification, TowersError> {
    let total = r.from + r.period;
    let infinite_level = (0..total).find(|&k| r.levels[k].unbounded);
    let empty_from = (0..total).find(|&k| r.levels[k].is_empty());
    let kappa_prime = infinite_level.is_none();
    let nubar_prime = empty_from.is_some();
    let phi = kappa_prime && nubar_prime;
    let verdict = match (kappa_prime, nubar_prime) {
        _ if empty_from == Some(0) => Verdict::Both,
        (true, true) => Verdict::InPhi,
        (true, false) => Verdict::InKappaPrime,
        (false, true) => Verdict::InNubarPrime,
        (false, false) => Verdict::Neither,
    };
    let thread = if nubar_prime { None } else { Some(find_thread(r)) };
    Ok(Classification { verdict, kappa_prime, nubar_prime, phi, thread, infinite_level, empty_from })
}

/// Vertex thread through a restriction whose levels are all nonempty.
fn find_thread(r: &Restriction) -> Thread {
    let tower = &r.tower;
    let (from, period) = (r.from, r.period);
    let image = |level: usize, v: usize| tower.bonding(level).unwrap().image(v)[0].0;
    let vertices_of = |k: usize| -> Vec<usize> {
        let l = tower.level(k).unwrap();
        l.cells_in_dim(0).iter().copied().filter(|&v| r.level(k).core[v]).collect()
    };
    // vertices of the block that lie on some infinite upward chain
    let mut alive: Vec<Vec<usize>> = (0..period).map(|j| vertices_of(from + j)).collect();
    loop {
        let mut changed = false;
        for j in 0..period {
            let above = alive[(j + 1) % period].clone();
            let before = alive[j].len();
            alive[j].retain(|&v| above.iter().any(|&w| image(from + j, w) == v));
            changed |= alive[j].len() != before;
        }
        if !changed {
            break;
        }
    }
    let start = *alive[0].first().expect("nonempty compact levels carry a thread");
    let mut upward = vec![start];
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    seen.insert((0, start), 0);
    let (cycle_start, cycle_len) = loop {
        let k = upward.len() - 1;
        let j = k % period;
        let v = upward[k];
        let next = *alive[(j + 1) % period]
            .iter()
            .find(|&&w| image(from + j, w) == v)
            .expect("surviving vertices have surviving preimages");
        let state = ((j + 1) % period, next);
        if let Some(&first) = seen.get(&state) {
            break (from + first, k + 1 - first);
        }
        seen.insert(state, k + 1);
        upward.push(next);
    };
    let mut below = vec![0usize; from];
    let mut cur = start;
    for k in (0..from).rev() {
        cur = image(k, cur);
        below[k] = cur;
    }
    below.extend(upward);
    Thread { vertices: below, cycle_start, cycle_len }
}

/// Outcome of checking both biconditionals relating `κ′`, `ν̄′` and `φ` for one restriction.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub classification: Classification,
    pub kappa_samples: usize,
    pub nubar_samples: usize,
    /// `R ∈ ν̄′ ⟺ R ∩ K ∈ φ for every K ∈ κ′`, on the sample plus the constructed witness.
    pub nubar_side: bool,
    /// `R ∈ κ′ ⟺ R ∩ N ∈ φ for every N ∈ ν̄′`, on the sample plus the constructed witness.
    pub kappa_side: bool,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.nubar_side && self.kappa_side && self.failures.is_empty()
    }
}

pub fn telescope_duality_check(
    r: &Restriction,
    kappa_sample: &[Restriction],
    nubar_sample: &[Restriction],
) -> Result<DualityReport, TowersError> {
    let c = classify_restriction(r)?;
    let mut failures = Vec::new();
    let mut meets_all_kappa = true;
    for (i, k) in kappa_sample.iter().enumerate() {
        if !classify_restriction(k)?.kappa_prime {
            failures.push(format!("kappa sample {i} is not in the family"));
        }
        meets_all_kappa &= classify_restriction(&r.intersection(k))?.phi;
    }
    let mut meets_all_nubar = true;
    for (i, n) in nubar_sample.iter().enumerate() {
        if !classify_restriction(n)?.nubar_prime {
            failures.push(format!("nubar sample {i} is not in the family"));
        }
        meets_all_nubar &= classify_restriction(&r.intersection(n))?.phi;
    }
    let nubar_side = if c.nubar_prime {
        meets_all_kappa
    } else {
        let thread = c.thread.as_ref().expect("restrictions outside the family carry a thread");
        let k = thread.as_restriction(r.tower.clone());
        let kc = classify_restriction(&k)?;
        let meet = classify_restriction(&r.intersection(&k))?;
        if !kc.kappa_prime {
            failures.push("thread restriction is not finite".into());
        }
        kc.kappa_prime && !meet.phi
    };
    let kappa_side = if c.kappa_prime {
        meets_all_nubar
    } else {
        let n = c.infinite_level.expect("restrictions outside the family have an infinite level");
        let prefix: Vec<LevelSet> = (0..=n).map(|k| r.level(k).clone()).collect();
        let witness = Restriction::then_empty(r.tower.clone(), prefix)?;
        let wc = classify_restriction(&witness)?;
        let meet = classify_restriction(&r.intersection(&witness))?;
        if !wc.nubar_prime {
            failures.push("truncated restriction does not have empty limit".into());
        }
        wc.nubar_prime && !meet.phi
    };
    Ok(DualityReport {
        classification: c,
        kappa_samples: kappa_sample.len(),
        nubar_samples: nubar_sample.len(),
        nubar_side,
        kappa_side,
        failures,
    })
}

/// Per level, the face-closure of every closed cell meeting the level set of `k`.
pub fn kappa_double_prime(tower: &Arc<Tower>, k: &Restriction) -> Result<Restriction, TowersError> {
    if !Arc::ptr_eq(tower, &k.tower) {
        return Err(TowersError::InvalidCompactSpec("restriction belongs to another tower".into()));
    }
    if let Some(i) = (0..k.from + k.period).find(|&i| k.levels[i].unbounded) {
        return Err(TowersError::InvalidCompactSpec(format!("level {i} is not compact")));
    }
    let levels = (0..k.from + k.period)
        .map(|i| {
            let l = tower.level(i).unwrap();
            let inside = &k.levels[i].core;
            let star: Vec<bool> = (0..l.len())
                .map(|c| {
                    let mut single = vec![false; l.len()];
                    single[c] = true;
                    close(l, single).iter().zip(inside).any(|(a, b)| *a && *b)
                })
                .collect();
            LevelSet { core: close(l, star), unbounded: false }
        })
        .collect();
    Restriction::new(tower.clone(), levels, k.from, k.period).map_err(|e| TowersError::InvalidCompactSpec(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyKind {
    KappaPrime,
    NubarPrime,
    Phi,
    KappaDoublePrime,
}

impl FamilyKind {
    pub fn admits(&self, c: &Classification) -> bool {
        match self {
            FamilyKind::KappaPrime | FamilyKind::KappaDoublePrime => c.kappa_prime,
            FamilyKind::NubarPrime => c.nubar_prime,
            FamilyKind::Phi => c.phi,
        }
    }
}

/// A finite sample of members of one family of restrictions.
#[derive(Clone, Debug)]
pub struct FiltrationFamily {
    pub kind: FamilyKind,
    pub members: Vec<Restriction>,
}

impl FiltrationFamily {
    pub fn new(kind: FamilyKind, members: Vec<Restriction>) -> Result<Self, TowersError> {
        for (i, m) in members.iter().enumerate() {
            if !kind.admits(&classify_restriction(m)?) {
                return Err(TowersError::InvalidRestriction(format!("member {i} is not in the {kind:?} family")));
            }
        }
        Ok(FiltrationFamily { kind, members })
    }

    /// `count` random members of the family.
    pub fn sample<R: Rng>(tower: Arc<Tower>, kind: FamilyKind, rng: &mut R, count: usize) -> Result<Self, TowersError> {
        let (tf, _) = tower_block(&tower)?;
        let mut members = Vec::with_capacity(count);
        for _ in 0..count {
            let density = rng.gen_range(0.05..0.6);
            let m = match kind {
                FamilyKind::KappaPrime => {
                    let e = rng.gen_bool(0.5).then(|| rng.gen_range(0..=tf + 2));
                    Restriction::random(tower.clone(), rng, density, 0, e)?
                }
                FamilyKind::NubarPrime => {
                    let e = rng.gen_range(0..=tf + 2);
                    let u = rng.gen_range(0..=e);
                    Restriction::random(tower.clone(), rng, density, u, Some(e))?
                }
                FamilyKind::Phi => {
                    let e = rng.gen_range(0..=tf + 2);
                    Restriction::random(tower.clone(), rng, density, 0, Some(e))?
                }
                FamilyKind::KappaDoublePrime => {
                    let e = rng.gen_bool(0.5).then(|| rng.gen_range(0..=tf + 2));
                    let k = Restriction::random(tower.clone(), rng, density * 0.5, 0, e)?;
                    kappa_double_prime(&tower, &k)?
                }
            };
            members.push(m);
        }
        FiltrationFamily::new(kind, members)
    }
}
