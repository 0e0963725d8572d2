//! An exact-arithmetic engine for homology of glued circle-bundle manifolds.
//!
//! The engine mechanizes two long exact sequences with named-generator
//! tracking: the Gysin sequence of a principal circle bundle over a torus,
//! and the Mayer–Vietoris sequence of a union. Level sets of a moment map
//! are circle bundles; crossing a critical level is an elementary cobordism
//! solved from both sides; unions and a final twisted gluing assemble the
//! homology of the closed manifold, its Betti numbers, and the pairing of
//! the first Chern class against every surviving generator. All arithmetic
//! is exact rational: a single rounding error would flip a Betti number.

pub mod chern;
pub mod cobordism;
pub mod error;
pub mod forms;
pub mod gysin;
pub mod label;
pub mod mv;
pub mod pipeline;
pub mod ratmat;
pub mod report;
pub mod scenario;
pub mod space;

pub use error::{EngineError, Result};
