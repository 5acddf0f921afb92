//! Necessary conditions for a pseudo-Riemannian manifold with a Poisson
//! structure to admit a smooth noncommutative deformation.
//!
//! Scenes are given in a single chart by expression strings for the metric
//! and the bivector. The library evaluates, pointwise and over sample grids,
//! the Poisson divergence, the torsion, metric compatibility and curvature of
//! the metric contravariant connection, the curvature of `g' = π^t g π`, and
//! the Lie-algebraic reductions for linear Poisson structures and r-matrices.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod contravariant;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod jets;
pub mod liealg;
pub mod linalg;
pub(crate) mod local;
pub mod poisson;
pub mod report;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
