//! Computations with Rota-Baxter operators on finite groups: enumeration,
//! induced skew braces, cohomology of Rota-Baxter modules, extensions and
//! their classification, and the Wells exact sequence.

pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod extensions;
pub mod group;
pub mod operators;
pub mod wells;

pub use catalog::{make_group, make_group_with_bound};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupMap};
pub use operators::{RotaBaxterOperator, SkewBrace};
