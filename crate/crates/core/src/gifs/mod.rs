//! Generalized iterated function systems: maps from a symmetric power of a
//! space back into the space, weighted by a normal weight vector and a
//! triangular norm.

mod contraction;
mod hutchinson;
mod kernel;
mod system;

pub use contraction::{check_contraction, ContractionReport, LadderEntry, MapContraction};
pub use hutchinson::{attractor_set, hutchinson_step};
pub use kernel::psi;
pub use system::{AffineMap, GifSystem, GifsMap, TableMap, ValidationIssue, ValidationReport};
