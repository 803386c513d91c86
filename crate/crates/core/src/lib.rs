//! Finite models of loose graphs and their F1-schemes over small fields.

pub mod aut;
pub mod error;
pub mod f1;
pub mod field;
pub mod graph;
pub mod linalg;
pub mod matrices;
pub mod perm;
pub mod proj;
pub mod refine;
pub mod sample;
pub mod scheme;
pub mod theorems;

pub use error::{Error, Result};
pub use field::FField;
pub use graph::{LooseGraph, LooseMorphism};
pub use perm::{Perm, PermGroup};
