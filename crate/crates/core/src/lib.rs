//! Finite CAT(0) cube complexes, as median graphs: hyperplanes, metrics,
//! gate projections, well-separation, contact graphs, Sageev duality, and
//! finite group actions.
//!
//! Start with [`graph::CubeGraph`] and [`complex::CubeComplex::new`], which
//! validates the median property and computes the hyperplane structure that
//! everything else reads from.

pub mod actions;
pub mod analyze;
pub mod complex;
pub mod contact;
pub mod convexity;
pub mod dot;
pub mod duality;
pub mod error;
pub mod generate;
pub mod graph;
pub mod iso;
pub mod oracle;
pub mod separation;
pub mod suite;
pub mod util;

pub use complex::{Caps, CubeComplex, Side};
pub use error::{Error, Result};
pub use graph::CubeGraph;
