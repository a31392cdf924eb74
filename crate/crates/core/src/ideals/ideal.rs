use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AxisSet, Coord, Extreme, IdealsError, Literal, SemilinearSet, StepFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealKind {
    /// Sets with compact closure: supports of elements of colimits of products.
    KappaType,
    /// Closed sets: supports of elements of limits of sums.
    NubarType,
}

/// Cofinal generating family of an ideal of subsets of `ℕ²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `ℕ × {1, …, j}` for `j ∈ ℕ`.
    FirstRows,
    /// `{1, …, i} × ℕ` for `i ∈ ℕ`.
    FirstColumns,
    /// `{(i, j) : i ≤ f(j)}` for step functions `f`.
    UnderRows,
    /// `{(i, j) : j ≤ f(i)}` for step functions `f`.
    UnderColumns,
    /// All finite sets.
    Finite,
    /// All of `ℕ²`.
    All,
    /// Finite unions of the listed sets.
    Explicit(Vec<SemilinearSet>),
}

/// Downward closed, union closed family of subsets of `ℕ²`, given by a
/// cofinal generating family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexIdeal {
    pub kind: IdealKind,
    pub family: Family,
}

/// Proof of membership of a set in an ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Contained in `ℕ × {1, …, j}`.
    FirstRows(u64),
    /// Contained in `{1, …, i} × ℕ`.
    FirstColumns(u64),
    /// Contained in `{i ≤ f(j)}`.
    UnderRows(StepFunction),
    /// Contained in `{j ≤ f(i)}`.
    UnderColumns(StepFunction),
    Finite,
    All,
    /// Covered by the union of these generators.
    Generators(Vec<usize>),
}

impl Witness {
    /// The generator (or finite union of generators) the witness names.
    pub fn region(&self, family: &Family) -> Option<SemilinearSet> {
        Some(match self {
            Witness::FirstRows(j) => SemilinearSet::first_rows(*j),
            Witness::FirstColumns(i) => SemilinearSet::first_columns(*i),
            Witness::UnderRows(f) => SemilinearSet::under_rows(f.clone()),
            Witness::UnderColumns(f) => SemilinearSet::under_columns(f.clone()),
            Witness::All => SemilinearSet::full(),
            Witness::Finite => return None,
            Witness::Generators(ix) => match family {
                Family::Explicit(g) => ix.iter().fold(SemilinearSet::empty(), |acc, &k| acc.union(&g[k])),
                _ => return None,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Witness>,
}

impl Membership {
    fn yes(w: Witness) -> Self {
        Membership { member: true, witness: Some(w) }
    }

    fn no() -> Self {
        Membership { member: false, witness: None }
    }
}

impl IndexIdeal {
    pub fn new(kind: IdealKind, family: Family) -> Self {
        IndexIdeal { kind, family }
    }

    /// Random members of the generating family.
    pub fn sample_generators<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<SemilinearSet> {
        (0..count)
            .map(|_| match &self.family {
                Family::FirstRows => SemilinearSet::first_rows(rng.gen_range(1..=30)),
                Family::FirstColumns => SemilinearSet::first_columns(rng.gen_range(1..=30)),
                Family::UnderRows => SemilinearSet::under_rows(random_step(rng)),
                Family::UnderColumns => SemilinearSet::under_columns(random_step(rng)),
                Family::Finite => {
                    SemilinearSet::points((0..rng.gen_range(0..12)).map(|_| (rng.gen_range(1..=20), rng.gen_range(1..=20))))
                }
                Family::All => SemilinearSet::full(),
                Family::Explicit(g) if g.is_empty() => SemilinearSet::empty(),
                Family::Explicit(g) => g[rng.gen_range(0..g.len())].clone(),
            })
            .collect()
    }
}

/// Whether `s` lies in the ideal, with the generator covering it.
pub fn in_ideal(s: &SemilinearSet, ideal: &IndexIdeal) -> Result<Membership, IdealsError> {
    let covered = |w: Witness| -> Result<Membership, IdealsError> {
        let region = w.region(&ideal.family).expect("region witness");
        Ok(if s.is_subset_of(&region)? { Membership::yes(w) } else { Membership::no() })
    };
    match &ideal.family {
        Family::All => Ok(Membership::yes(Witness::All)),
        Family::Finite => Ok(if s.is_finite()? { Membership::yes(Witness::Finite) } else { Membership::no() }),
        Family::FirstRows => match s.last_row()? {
            Some(j) => covered(Witness::FirstRows(j)),
            None => Ok(Membership::no()),
        },
        Family::FirstColumns => match s.last_column()? {
            Some(i) => covered(Witness::FirstColumns(i)),
            None => Ok(Membership::no()),
        },
        Family::UnderRows => match s.row_extreme(Extreme::Max) {
            Ok(f) => covered(Witness::UnderRows(f)),
            Err(IdealsError::WitnessConstructionFailed { .. }) => Ok(Membership::no()),
            Err(e) => Err(e),
        },
        Family::UnderColumns => match s.column_extreme(Extreme::Max) {
            Ok(f) => covered(Witness::UnderColumns(f)),
            Err(IdealsError::WitnessConstructionFailed { .. }) => Ok(Membership::no()),
            Err(e) => Err(e),
        },
        Family::Explicit(g) => {
            let mut used = Vec::new();
            for (k, gen) in g.iter().enumerate() {
                if !s.intersect(gen).is_empty()? {
                    used.push(k);
                }
            }
            covered(Witness::Generators(used))
        }
    }
}

/// Whether `s` meets every member of the ideal in a finite set. Otherwise
/// also returns a member meeting `s` in an infinite set.
pub fn meets_every_member_finitely(
    s: &SemilinearSet,
    ideal: &IndexIdeal,
) -> Result<(bool, Option<SemilinearSet>), IdealsError> {
    let check_all = |gens: Vec<SemilinearSet>| -> Result<(bool, Option<SemilinearSet>), IdealsError> {
        for g in gens {
            if !s.intersect(&g).is_finite()? {
                return Ok((false, Some(g)));
            }
        }
        Ok((true, None))
    };
    match &ideal.family {
        Family::Finite => Ok((true, None)),
        Family::All => check_all(vec![SemilinearSet::full()]),
        Family::Explicit(g) => check_all(g.clone()),
        Family::FirstRows => check_all((1..=s.row_settled_from()?).map(SemilinearSet::first_rows).collect()),
        Family::FirstColumns => check_all((1..=s.column_settled_from()?).map(SemilinearSet::first_columns).collect()),
        // the region under the row minima meets every nonempty row of `s`
        Family::UnderRows => check_all(vec![SemilinearSet::under_rows(s.row_extreme(Extreme::Min)?)]),
        Family::UnderColumns => check_all(vec![SemilinearSet::under_columns(s.column_extreme(Extreme::Min)?)]),
    }
}

/// Ideals `κ` and `ν̄` of the same index set, dual to each other: a set is
/// in one exactly when it meets every member of the other in a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedIdeals {
    pub kappa: IndexIdeal,
    pub nubar: IndexIdeal,
}

impl PairedIdeals {
    /// `κ` generated by horizontal strips `ℕ × {1, …, j}`, `ν̄` by the regions under row graphs.
    pub fn horizontal() -> Self {
        PairedIdeals {
            kappa: IndexIdeal::new(IdealKind::KappaType, Family::FirstRows),
            nubar: IndexIdeal::new(IdealKind::NubarType, Family::UnderRows),
        }
    }

    /// `ν̄` generated by vertical strips `{1, …, i} × ℕ`, `κ` by the regions under column graphs.
    pub fn vertical() -> Self {
        PairedIdeals {
            kappa: IndexIdeal::new(IdealKind::KappaType, Family::UnderColumns),
            nubar: IndexIdeal::new(IdealKind::NubarType, Family::FirstColumns),
        }
    }

    /// Discrete union of compact pieces: `κ` finite sets, `ν̄` everything.
    pub fn discrete() -> Self {
        PairedIdeals {
            kappa: IndexIdeal::new(IdealKind::KappaType, Family::Finite),
            nubar: IndexIdeal::new(IdealKind::NubarType, Family::All),
        }
    }

    /// Pieces converging to a point: `κ` everything, `ν̄` finite sets.
    pub fn clustered() -> Self {
        PairedIdeals {
            kappa: IndexIdeal::new(IdealKind::KappaType, Family::All),
            nubar: IndexIdeal::new(IdealKind::NubarType, Family::Finite),
        }
    }

    /// Orientation random sets should have to stay decidable under this pairing.
    pub fn orientation(&self) -> Coord {
        match (&self.kappa.family, &self.nubar.family) {
            (Family::UnderColumns, _) | (_, Family::FirstColumns) => Coord::I,
            _ => Coord::J,
        }
    }

    /// Member of `κ` meeting `s` in an infinite set, given `s ∉ ν̄`.
    fn kappa_obstruction(&self, s: &SemilinearSet) -> Result<SemilinearSet, IdealsError> {
        match (&self.kappa.family, &self.nubar.family) {
            (Family::FirstRows, Family::UnderRows) => {
                let j = s.infinite_row()?.ok_or_else(|| unsupported("no infinite row"))?;
                Ok(SemilinearSet::first_rows(j))
            }
            (Family::UnderColumns, Family::FirstColumns) => {
                Ok(SemilinearSet::under_columns(s.column_extreme(Extreme::Min)?))
            }
            (Family::All, Family::Finite) => Ok(SemilinearSet::full()),
            (k, n) => Err(unsupported(&format!("no obstruction for {k:?} against {n:?}"))),
        }
    }

    /// Member of `ν̄` meeting `s` in an infinite set, given `s ∉ κ`.
    fn nubar_obstruction(&self, s: &SemilinearSet) -> Result<SemilinearSet, IdealsError> {
        match (&self.kappa.family, &self.nubar.family) {
            (Family::FirstRows, Family::UnderRows) => Ok(SemilinearSet::under_rows(s.row_extreme(Extreme::Min)?)),
            (Family::UnderColumns, Family::FirstColumns) => {
                let i = s.infinite_column()?.ok_or_else(|| unsupported("no infinite column"))?;
                Ok(SemilinearSet::first_columns(i))
            }
            (Family::Finite, Family::All) => Ok(SemilinearSet::full()),
            (k, n) => Err(unsupported(&format!("no obstruction for {k:?} against {n:?}"))),
        }
    }

    /// Generators that suffice to decide "meets every member finitely":
    /// for strip families, every strip up to a bound past which `s` is settled.
    fn exhaustive(&self, ideal: &IndexIdeal, s: &SemilinearSet) -> Result<Vec<SemilinearSet>, IdealsError> {
        Ok(match &ideal.family {
            Family::FirstRows => {
                let top = s.row_settled_from()?;
                (1..=top).map(SemilinearSet::first_rows).collect()
            }
            Family::FirstColumns => {
                let top = s.column_settled_from()?;
                (1..=top).map(SemilinearSet::first_columns).collect()
            }
            Family::All => vec![SemilinearSet::full()],
            Family::Explicit(g) => g.clone(),
            _ => vec![],
        })
    }
}

fn unsupported(msg: &str) -> IdealsError {
    IdealsError::UnsupportedPairing(msg.to_string())
}

/// Outcome of checking both halves of the duality for one set.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub in_kappa: Membership,
    pub in_nubar: Membership,
    /// `s ∈ ν̄ ⟺ s ∩ K finite for all K ∈ κ` held on every tested generator.
    pub nubar_side: bool,
    /// `s ∈ κ ⟺ s ∩ F finite for all F ∈ ν̄` held on every tested generator.
    pub kappa_side: bool,
    /// Why the row (or column) bound witness could not be built, when `s ∉ ν̄`.
    pub witness_failure: Option<String>,
    /// Member of `κ` meeting `s` infinitely.
    pub kappa_obstruction: Option<SemilinearSet>,
    /// Member of `ν̄` meeting `s` infinitely.
    pub nubar_obstruction: Option<SemilinearSet>,
    pub generators_tested: usize,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.nubar_side && self.kappa_side
    }
}

/// Checks `s ∈ ν̄ ⟺ s` meets every member of `κ` finitely, and
/// `s ∈ κ ⟺ s` meets every member of `ν̄` finitely, on `samples` random
/// generators of each ideal plus exhaustive strip checks and constructed
/// obstructions for the converse directions.
pub fn duality_check<R: Rng>(
    s: &SemilinearSet,
    pair: &PairedIdeals,
    samples: usize,
    rng: &mut R,
) -> Result<DualityReport, IdealsError> {
    let in_kappa = in_ideal(s, &pair.kappa)?;
    let in_nubar = in_ideal(s, &pair.nubar)?;
    let witness_failure = match &pair.nubar.family {
        Family::UnderRows => s.row_extreme(Extreme::Max).err().map(|e| e.to_string()),
        Family::UnderColumns => s.column_extreme(Extreme::Max).err().map(|e| e.to_string()),
        _ => None,
    };
    let mut tested = 0;

    let mut kappa_gens = pair.kappa.sample_generators(rng, samples);
    kappa_gens.extend(pair.exhaustive(&pair.kappa, s)?);
    let mut meets_kappa_finitely = true;
    for k in &kappa_gens {
        meets_kappa_finitely &= s.intersect(k).is_finite()?;
    }
    tested += kappa_gens.len();
    let kappa_obstruction = if in_nubar.member { None } else { Some(pair.kappa_obstruction(s)?) };
    let nubar_side = if in_nubar.member {
        meets_kappa_finitely
    } else {
        let k = kappa_obstruction.as_ref().expect("set above");
        tested += 1;
        in_ideal(k, &pair.kappa)?.member && !s.intersect(k).is_finite()?
    };

    let mut nubar_gens = pair.nubar.sample_generators(rng, samples);
    nubar_gens.extend(pair.exhaustive(&pair.nubar, s)?);
    if let Some(Witness::UnderRows(f)) = &in_nubar.witness {
        nubar_gens.push(SemilinearSet::under_rows(f.clone()));
    }
    if let Some(Witness::UnderColumns(f)) = &in_nubar.witness {
        nubar_gens.push(SemilinearSet::under_columns(f.clone()));
    }
    let mut meets_nubar_finitely = true;
    for n in &nubar_gens {
        meets_nubar_finitely &= s.intersect(n).is_finite()?;
    }
    tested += nubar_gens.len();
    let nubar_obstruction = if in_kappa.member { None } else { Some(pair.nubar_obstruction(s)?) };
    let kappa_side = if in_kappa.member {
        meets_nubar_finitely
    } else {
        let n = nubar_obstruction.as_ref().expect("set above");
        tested += 1;
        in_ideal(n, &pair.nubar)?.member && !s.intersect(n).is_finite()?
    };

    Ok(DualityReport {
        in_kappa,
        in_nubar,
        nubar_side,
        kappa_side,
        witness_failure,
        kappa_obstruction,
        nubar_obstruction,
        generators_tested: tested,
    })
}

pub fn random_step<R: Rng>(rng: &mut R) -> StepFunction {
    let len = rng.gen_range(0..4);
    let table = (0..len).map(|_| rng.gen_range(0..9)).collect();
    StepFunction::new(table, rng.gen_range(0..3), rng.gen_range(0..9))
}

fn random_axis<R: Rng>(rng: &mut R) -> AxisSet {
    let values = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..=7)).collect();
    if rng.gen_bool(0.5) {
        AxisSet::Finite(values)
    } else {
        AxisSet::Cofinite(values)
    }
}

fn random_literal<R: Rng>(rng: &mut R, coord: Coord) -> Literal {
    let pts = |rng: &mut R| (0..rng.gen_range(1..5)).map(|_| (rng.gen_range(1..=8), rng.gen_range(1..=8))).collect();
    match rng.gen_range(0..6) {
        0 => Literal::Points(pts(rng)),
        1 => Literal::CoPoints(pts(rng)),
        2 => Literal::Rect(random_axis(rng), random_axis(rng)),
        3 | 4 => Literal::Under(random_step(rng), coord),
        _ => Literal::Above(random_step(rng), coord),
    }
}

/// Random union of up to three intersections of up to three literals, with
/// every graph region a function of `coord`.
pub fn random_set<R: Rng>(rng: &mut R, coord: Coord) -> SemilinearSet {
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| random_literal(rng, coord)).collect())
        .collect();
    SemilinearSet::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    #[test]
    fn strip_membership() {
        let pair = PairedIdeals::horizontal();
        let s = SemilinearSet::first_rows(2);
        assert_eq!(in_ideal(&s, &pair.kappa).unwrap(), Membership::yes(Witness::FirstRows(2)));
        assert!(!in_ideal(&SemilinearSet::diagonal(), &pair.kappa).unwrap().member);
        assert!(in_ideal(&SemilinearSet::empty(), &pair.kappa).unwrap().member);
        assert!(in_ideal(&SemilinearSet::empty(), &pair.nubar).unwrap().member);
    }

    #[test]
    fn diagonal_is_under_the_identity() {
        let pair = PairedIdeals::horizontal();
        let m = in_ideal(&SemilinearSet::diagonal(), &pair.nubar).unwrap();
        assert_eq!(m.witness, Some(Witness::UnderRows(StepFunction::identity().normalized())));
        let r = duality_check(&SemilinearSet::diagonal(), &pair, 10, &mut rng()).unwrap();
        assert!(r.passed());
        assert!(r.nubar_obstruction.is_some());
    }

    #[test]
    fn full_quadrant_is_in_neither() {
        let pair = PairedIdeals::horizontal();
        let s = SemilinearSet::rect(AxisSet::Cofinite([1].into()), AxisSet::Cofinite([2].into()));
        let r = duality_check(&s, &pair, 10, &mut rng()).unwrap();
        assert!(r.passed());
        assert!(!r.in_kappa.member && !r.in_nubar.member);
        assert!(r.witness_failure.is_some());
    }

    #[test]
    fn first_column_is_closed() {
        let pair = PairedIdeals::horizontal();
        let s = SemilinearSet::first_columns(1);
        let r = duality_check(&s, &pair, 10, &mut rng()).unwrap();
        assert!(r.passed() && r.in_nubar.member && !r.in_kappa.member);
    }

    #[test]
    fn vertical_pairing_mirrors_horizontal() {
        let pair = PairedIdeals::vertical();
        let s = SemilinearSet::diagonal().transpose();
        let r = duality_check(&s, &pair, 10, &mut rng()).unwrap();
        assert!(r.passed());
        assert!(r.in_kappa.member && !r.in_nubar.member);
    }

    #[test]
    fn explicit_generators_cover() {
        let ideal = IndexIdeal::new(
            IdealKind::KappaType,
            Family::Explicit(vec![SemilinearSet::first_rows(1), SemilinearSet::points([(3, 3)])]),
        );
        let m = in_ideal(&SemilinearSet::points([(9, 1), (3, 3)]), &ideal).unwrap();
        assert_eq!(m.witness, Some(Witness::Generators(vec![0, 1])));
        assert!(!in_ideal(&SemilinearSet::points([(3, 4)]), &ideal).unwrap().member);
    }

    #[test]
    fn random_sets_satisfy_duality() {
        let mut r = rng();
        for pair in [PairedIdeals::horizontal(), PairedIdeals::vertical(), PairedIdeals::discrete(), PairedIdeals::clustered()] {
            for _ in 0..60 {
                let s = random_set(&mut r, pair.orientation());
                let rep = duality_check(&s, &pair, 4, &mut r).unwrap();
                assert!(rep.passed(), "{s}");
            }
        }
    }
}
