//! Closed essential surface detection for triangulated 3-manifolds using
//! quadrilateral normal coordinates.

#![allow(clippy::needless_range_loop)]

pub mod crush;
pub mod cutter;
pub mod enumerate;
pub mod fixtures;
pub mod homology;
pub mod perm;
pub mod pipeline;
pub mod qtheory;
pub mod surface;
pub mod tri_core;
pub mod union_find;

pub use perm::Perm4;
pub use tri_core::{Gluing, OrientationState, TriError, Triangulation};
