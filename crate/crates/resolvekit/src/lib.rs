//! Onesided resolving degrees, closingness and textile constructions for
//! endomorphisms of topological Markov shifts given by local rules.

pub mod construct;
pub mod degree;
pub mod error;
pub mod graph;
pub mod hom;
pub mod kitchens;
pub mod limits;
pub mod rule;
pub mod samples;
pub mod textile;

pub use error::{Error, Result};
