//! Weighted Fermat-Torricelli points of tetrahedra.
//!
//! The centerpiece is the closed-form solution for a regular tetrahedron
//! whose vertices carry two pairs of equal weights: weight `b1` on edge
//! `A1A2`, weight `b4` on the opposite edge `A3A4`. The minimizer then lies
//! on the common perpendicular of those edges, and its signed coordinate
//! along that axis is a root of a quartic with a radical closed form.
//! Surrounding it are an equilibrium classifier, a general quartic root
//! finder, the vertex angles at the solution, numerical oracles
//! (Weiszfeld, golden-section, bisection) and the ray-stretch invariance
//! construction.

// Range checks are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod angles;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod geom;
pub mod numeric;
pub mod plasticity;
pub mod quartic;

pub use error::{Error, Result};
pub use geom::{Case, FtSolution, Point3, RegularEmbedding, SymmetricInstance, WeightedTetrahedron};
