//! Sub-Riemannian geometry of odd-dimensional spheres.
//!
//! The crate covers the contact structure of `S^{2n+1}` (Hopf fibration) and
//! the corank-3 structure of `S^{4n+3}` (quaternionic Hopf fibration):
//!
//! - [`algebra`]: exact rational polynomials, vector fields, operators, quaternions
//! - [`frames`]: the vertical and horizontal frames together with their identities
//! - [`geodesics`]: closed-form normal geodesics and their diagnostics
//! - [`shooting`]: two-point boundary value solver over the closed forms
//! - [`htype`]: the quaternionic H-type group, its connection and geodesic equation
//! - [`subelliptic`]: sub-Laplacians on `S^3`/`S^7`, quotient matrices, heat factorization
//! - [`cli`]: the `srsphere` command line

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod frames;
pub mod geodesics;
pub mod htype;
pub mod linalg;
pub mod report;
pub mod shooting;
pub mod subelliptic;

pub use error::{Error, Result};

/// Toolkit identifier embedded in every output header.
pub const TOOLKIT_VERSION: &str = concat!("srsphere ", env!("CARGO_PKG_VERSION"));
