//! Subsets of `ℕ²` with decidable structure, ideals of such sets given by
//! generating families, and the duality between the two ideal types.

mod ideal;
mod set;
mod step;

pub use ideal::{
    duality_check, in_ideal, meets_every_member_finitely, random_set, random_step, DualityReport, Family, IdealKind, IndexIdeal, Membership, PairedIdeals,
    Witness,
};
pub use set::{AxisSet, Coord, Extreme, Line, Literal, SemilinearSet, SetExpr};
pub use step::StepFunction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IdealsError {
    #[error("set mixes row-wise and column-wise graph regions")]
    MixedOrientation,
    #[error("line {line} is infinite, so no bounding step function exists")]
    WitnessConstructionFailed { line: u64 },
    #[error("unsupported ideal pairing: {0}")]
    UnsupportedPairing(String),
}

/// `true` iff `s` is a finite set.
pub fn is_finite(s: &SemilinearSet) -> Result<bool, IdealsError> {
    s.is_finite()
}
