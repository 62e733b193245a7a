use thiserror::Error;

use crate::pattern::{DirectedEdge, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("grid size {m}x{n} is too small: both periods must be at least 3")]
    SizeTooSmall { m: usize, n: usize },

    #[error("string length mismatch: {name} has length {actual}, expected {expected}")]
    LengthMismatch {
        name: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("cannot parse sign string {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },

    #[error("edge {0:?} disagrees with the pattern orientation")]
    InvalidEdge(DirectedEdge),

    #[error("displacement ({dx}, {dy}) is not divisible by the periods ({m}, {n})")]
    DivisibilityViolation {
        dx: i64,
        dy: i64,
        m: usize,
        n: usize,
    },

    #[error("pattern is not balanced: k(x) = {kx}, k(y) = {ky}")]
    NotBalanced { kx: i64, ky: i64 },

    #[error("heights along a loop disagree: {first} vs {other} at vertex {at:?}")]
    InconsistentHeight { first: i64, other: i64, at: Vertex },

    #[error("planar edge from ({a}, {b}) heading {dir} violates the left/right height rule")]
    OrientationViolation { a: i64, b: i64, dir: char },

    #[error("loop homology ({lambda}, {mu}) is outside the expected case: {expected}")]
    WrongHomology {
        lambda: i64,
        mu: i64,
        expected: &'static str,
    },

    #[error("invalid link-like map: {0}")]
    InvalidMap(String),

    #[error("face is not a triangle")]
    NotATriangle,

    #[error("triangle does not have alternating orientations")]
    NotAlternating,

    #[error("move schedule failed: {0}")]
    MoveScheduleFailure(String),

    #[error("sweep range exceeds ceiling: {0}")]
    CeilingExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
