//! Rendering and report formatting behind the `hitomezashi` binary.

pub mod render;
pub mod report;
