//! Exact integer linear algebra and finitely generated abelian groups.

pub mod group;
pub mod lattice;
pub mod matrix;
pub mod snf;
pub mod tower;

pub use group::{homology_all, homology_at, is_exact_at, AlgebraError, CanonicalGroup, GroupMap};
pub use lattice::{Presentation, SubLattice};
pub use matrix::IntMatrix;
pub use snf::{smith_decomposition, smith_invariants, smith_normal_form, Invariants, SmithForm};
pub use tower::{
    tower_colim, tower_images_stabilize, tower_lim, tower_lim1, ColimCalculus, ColimElement, ColimResult, Direction,
    GroupResult, GroupTower, TailPolicy, TowerError,
};
