//! Loops and link-like maps of toroidal Hitomezashi patterns.

pub mod error;
pub mod excursion;
pub mod height;
pub mod linklike;
pub mod loops;
pub mod oracle;
pub mod pattern;
pub mod verify;

pub use error::{Error, Result};
pub use loops::{decompose, next_edge, CountSummary, Loop, LoopDecomposition};
pub use pattern::{
    Axis, Dir, DirectedEdge, PlanarLift, PlanarVertex, Sign, SignString, Symmetry, ToroidalPattern,
    Vertex,
};
