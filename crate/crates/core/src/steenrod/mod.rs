//! Steenrod homology and Čech cohomology of towers.
//!
//! Homology is computed along two independent routes. For eventually constant
//! towers the relative mapping telescope gives the group exactly; for every
//! supported tail the limit and first derived limit of the level homology give
//! it as `lim H_n ⊕ lim¹ H_{n+1}`. When both routes run they must agree, and
//! a disagreement is reported instead of resolved.

mod chains;
mod skeletal;

use serde::Serialize;

pub use chains::{chain_group, ChainGroup, ChainMode, FiltrationChainComplex};
pub use skeletal::{
    hom_duality_check, skeletal_correspondence_check, telescope_complexes_agree, AgreementReport, PairingReport,
    SkeletalReport,
};

use crate::algebra::{
    tower_colim, tower_images_stabilize, tower_lim, tower_lim1, CanonicalGroup, ColimCalculus, GroupResult,
    TailPolicy, TowerError,
};
use crate::complexes::{Coefficients, Pair};
use crate::ideals::IdealsError;
use crate::kdirect::KDirectError;
use crate::towers::{build_telescope, Tower, TowersError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SteenrodError {
    #[error("bonding outside the supported class: {0}")]
    UnsupportedBonding(String),
    #[error("the tail of the tower does not determine the answer")]
    UndeterminedTail,
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Towers(TowersError),
    #[error(transparent)]
    Ideals(#[from] IdealsError),
    #[error(transparent)]
    KDirect(#[from] KDirectError),
}

impl From<TowerError> for SteenrodError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::UnsupportedBonding(s) => SteenrodError::UnsupportedBonding(s),
            other => SteenrodError::Towers(TowersError::Tower(other)),
        }
    }
}

impl From<TowersError> for SteenrodError {
    fn from(e: TowersError) -> Self {
        match e {
            TowersError::Tower(t) => t.into(),
            TowersError::UndecidableTail => SteenrodError::UndeterminedTail,
            other => SteenrodError::Towers(other),
        }
    }
}

/// Which route produced a homology group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    TelescopeExact,
    MilnorOracle,
    CrossChecked,
}

/// Outcome of the telescope route: `H_{n+1}` of the telescope of depth
/// `depth` relative to its two end levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeRun {
    pub depth: usize,
    pub relative: CanonicalGroup,
    pub group: CanonicalGroup,
}

/// Terms of the limit route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorTerms {
    pub lim: GroupResult,
    pub lim1: GroupResult,
    /// Whether the images in the `H_{n+1}` tower stabilize; `false` means
    /// `lim¹` may be nonzero.
    pub mittag_leffler: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct SteenrodResult {
    pub degree: usize,
    pub reduced: bool,
    pub coefficients: Coefficients,
    pub group: GroupResult,
    pub provenance: Provenance,
    pub telescope: Option<TelescopeRun>,
    pub milnor: Option<MilnorTerms>,
    pub discrepancy: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SteenrodOptions {
    pub reduced: bool,
    pub coefficients: Coefficients,
    /// Telescope depth; at least the stabilization index is always used.
    pub depth: Option<usize>,
}

/// `H_n` of the limit of the tower with integer coefficients.
pub fn steenrod_homology(tower: &Tower, n: usize) -> Result<SteenrodResult, SteenrodError> {
    steenrod_homology_with(tower, n, &SteenrodOptions::default())
}

pub fn steenrod_homology_with(tower: &Tower, n: usize, opts: &SteenrodOptions) -> Result<SteenrodResult, SteenrodError> {
    if opts.reduced && opts.coefficients != Coefficients::Integers {
        return Err(SteenrodError::Unsupported("reduced homology is only offered with integer coefficients".into()));
    }
    let t = tower.with_coefficients(&opts.coefficients)?;
    let reduced = opts.reduced && n == 0;

    let milnor = milnor_terms(&t, n, reduced)?;
    let telescope = match t.tail() {
        TailPolicy::EventuallyConstant { from } => Some(telescope_run(&t, n, reduced, opts.depth.unwrap_or(0).max(from).max(1))?),
        _ => None,
    };

    let oracle = if milnor.lim.is_undetermined() || milnor.lim1.is_undetermined() {
        let levels = match &milnor.lim {
            GroupResult::Undetermined { levels, .. } => levels.clone(),
            _ => vec![],
        };
        GroupResult::Undetermined { levels, reason: "tail unknown past the stored levels".into() }
    } else {
        GroupResult::sum(vec![milnor.lim.clone(), milnor.lim1.clone()])
    };

    let (group, provenance, discrepancy) = match &telescope {
        None => (oracle, Provenance::MilnorOracle, None),
        Some(run) => {
            let exact = GroupResult::Exact(run.group.clone());
            if exact == oracle {
                (exact, Provenance::CrossChecked, None)
            } else {
                let msg = format!("telescope gives {exact}, lim/lim1 gives {oracle}");
                let g = GroupResult::Undetermined { levels: vec![], reason: format!("pipelines disagree: {msg}") };
                (g, Provenance::CrossChecked, Some(msg))
            }
        }
    };
    Ok(SteenrodResult {
        degree: n,
        reduced,
        coefficients: opts.coefficients.clone(),
        group,
        provenance,
        telescope,
        milnor: Some(milnor),
        discrepancy,
    })
}

/// Only the telescope route; requires an eventually constant tower.
pub fn telescope_homology(tower: &Tower, n: usize, depth: usize) -> Result<TelescopeRun, SteenrodError> {
    match tower.tail() {
        TailPolicy::EventuallyConstant { from } => telescope_run(tower, n, false, depth.max(from).max(1)),
        _ => Err(SteenrodError::UndeterminedTail),
    }
}

fn telescope_run(t: &Tower, n: usize, reduced: bool, depth: usize) -> Result<TelescopeRun, SteenrodError> {
    let tel = build_telescope(t, depth)?;
    let pair = Pair::new(tel.complex.clone(), tel.ends())?;
    let relative = pair.relative_homology(n + 1, &Coefficients::Integers);
    // H_{n+1}(T, P_0 ⊔ P_d) ≅ H_n(P_d); reduction removes the augmentation summand
    let group = if reduced && relative.rank() > 0 {
        CanonicalGroup::new(relative.rank() - 1, relative.torsion().to_vec())
    } else {
        relative.clone()
    };
    Ok(TelescopeRun { depth, relative, group })
}

fn milnor_terms(t: &Tower, n: usize, reduced: bool) -> Result<MilnorTerms, SteenrodError> {
    let hn = if reduced { t.reduced_homology_tower(n)? } else { t.homology_tower(n)? };
    let hn1 = t.homology_tower(n + 1)?;
    Ok(MilnorTerms { lim: tower_lim(&hn)?, lim1: tower_lim1(&hn1)?, mittag_leffler: tower_images_stabilize(&hn1)? })
}

impl From<crate::complexes::ComplexError> for SteenrodError {
    fn from(e: crate::complexes::ComplexError) -> Self {
        SteenrodError::Towers(TowersError::Complex(e))
    }
}

#[derive(Clone, Debug)]
pub struct CechResult {
    pub degree: usize,
    pub coefficients: Coefficients,
    pub group: GroupResult,
    /// Element calculus on the colimit, when the tail is supported.
    pub calculus: Option<ColimCalculus>,
}

impl CechResult {
    pub fn rational_rank(&self) -> Option<usize> {
        self.calculus.as_ref().map(|c| c.rational_rank())
    }
}

/// `Ȟ^n` of the limit: the colimit of `H^n` of the levels.
pub fn cech_cohomology(tower: &Tower, n: usize) -> Result<CechResult, SteenrodError> {
    cech_cohomology_with(tower, n, &Coefficients::Integers)
}

pub fn cech_cohomology_with(tower: &Tower, n: usize, coeffs: &Coefficients) -> Result<CechResult, SteenrodError> {
    let t = tower.with_coefficients(coeffs)?;
    let degree = match coeffs {
        Coefficients::Integers => n,
        Coefficients::Mod(_) => n + 1,
    };
    let colim = tower_colim(&t.cohomology_tower(degree)?, true)?;
    Ok(CechResult { degree: n, coefficients: coeffs.clone(), group: colim.group, calculus: colim.calculus })
}
