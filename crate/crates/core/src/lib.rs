//! Complex geodesics of convex domains in `C^n`, reconstructed from a dual map
//! `h` through the support sets of the domain, plus an empirical toolkit for
//! C-convexity and linear convexity of semitube domains.
//!
//! The crate is organised bottom-up:
//!
//! - [`circle`]: spectral calculus on the unit circle (Fourier tables,
//!   Poisson/Schwarz extension, Hardy-membership residuals, measure splits).
//! - [`hclass`]: finite parametrizations of dual maps `h`.
//! - [`domains`]: built-in convex domains with membership, cones and support maps.
//! - [`geodesic`]: reconstruction, certification, sibling variation, Möbius
//!   reparametrization and the two-point connection solver.
//! - [`semitube`]: semitube bases, complex-line section rasters, topology, and
//!   the convexity / C-convexity / linear-convexity scans.
//!
//! Data-parallel loops go through [`exec::Execution`]; with the default
//! `parallel` feature they run on rayon, otherwise sequentially.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod domains;
pub mod error;
pub mod exec;
pub mod geodesic;
pub mod hclass;
pub mod json;
pub mod mixed;
pub mod semitube;

pub use error::{Error, Result};
pub use exec::Execution;
pub use mixed::Mixed;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Version tag embedded in every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
