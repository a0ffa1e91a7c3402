//! Finite-dimensional quiver algebras with relations, their standard,
//! costandard and tilting modules, and checks of the 1-quasi-hereditary axioms.

pub mod algebra;
pub mod error;
pub mod format;
pub mod lattice;
pub mod field;
pub mod matrix;
pub mod module;
pub mod pathbasis;
pub mod poset;
pub mod presentation;
pub mod presets;
pub mod qh;
pub mod report;
pub mod ringel;
pub mod tilting;

pub use error::{Error, Result};
