//! Angle-guard placement with monotone Boolean formulas, plus an exact
//! arrangement-based verifier.

pub mod error;
pub mod formula;
pub mod generators;
pub mod geom;
pub mod guards;
pub mod io;
pub mod partition;
pub mod placement;
pub mod polygon;
pub mod svg;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
