//! Face lattices, flag-vector inequalities and diameter flows for
//! 4-polytopes inscribed in the unit sphere.
//!
//! The pipeline runs from a spherical point set to a merged convex hull
//! ([`hull`]), its face lattice and polygon census ([`lattice`]), the polar
//! dual and the anti-self-polar certificate ([`polarity`]), the diameter graph
//! ([`diameter`]) and the integer checks on g₂, Kalai's and Stanley's
//! inequalities and the diameter-graph lower bound ([`verify`]). The [`flow`]
//! module generates candidate anti-self-polar configurations by descending
//! the spherical diameter, and [`io`] / [`commands`] provide file formats and
//! the command implementations used by the CLI.

// Negated float comparisons below deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod commands;
pub mod diameter;
pub mod error;
pub mod flow;
pub mod geom;
pub mod hull;
pub mod io;
pub mod lattice;
mod minnorm;
pub mod pipeline;
pub mod polarity;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{unit_project, PointCloud, ToleranceConfig, Vec4};
pub use hull::Facet;
