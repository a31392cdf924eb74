//! Exact homology and cohomology of finite cell complexes and of towers of them.

pub mod algebra;
pub mod exec;
pub mod complexes;
pub mod towers;
pub mod ideals;
pub mod kdirect;
pub mod steenrod;
pub mod axioms;
pub mod doc;
pub mod cli;
