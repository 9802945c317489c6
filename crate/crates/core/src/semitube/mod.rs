//! Semitube domains `S_B = Pi^{-1}(B)` over a base `B` in `R^{2n-1}`.
//!
//! Complex-line sections are rasterized and their topology counted by flood
//! fill; the scans built on top compare convexity of the base with
//! C-convexity and linear convexity of the semitube.

mod base;
mod harness;
mod linear;
mod raster;
mod scan;
mod topology;

pub use base::{BaseRepr, Primitive, SemitubeBase, VoxelGrid, DUMBBELL_NECK, SLIT_HALF_WIDTH};
pub use harness::{convexity_harness, HarnessConfig, HarnessRecord};
pub use linear::{
    alpha_from_b, b_from_alpha, hyperplane_from_b, linear_convexity_at, linear_convexity_scan,
    ExteriorResult, LinearScanConfig, LinearScanReport, RealAffineSubspace,
};
pub use raster::{line_section, ComplexLine, RasterConfig, SectionRaster, SIDES};
pub use scan::{
    cconvexity_scan, convexity_check, fiber_condition_check, ConvexityConfig, ConvexityReport,
    FiberConfig, FiberReport, ScanConfig, ScanReport, Violation,
};
pub use topology::{section_topology, topology, SectionTopology, TopologyReport};

use crate::C64;

/// `(Re z_1, Im z_1, ..., Re z_{n-1}, Im z_{n-1}, Re z_n)`.
pub fn project_pi(z: &[C64]) -> Vec<f64> {
    let n = z.len();
    let mut x = Vec::with_capacity(2 * n - 1);
    for w in &z[..n - 1] {
        x.push(w.re);
        x.push(w.im);
    }
    x.push(z[n - 1].re);
    x
}

/// Right inverse of [`project_pi`] with `Im z_n = 0`.
pub fn lift_iota(x: &[f64]) -> Vec<C64> {
    let n = x.len().div_ceil(2);
    let mut z: Vec<C64> = x[..2 * n - 2]
        .chunks(2)
        .map(|p| C64::new(p[0], p[1]))
        .collect();
    z.push(C64::new(x[2 * n - 2], 0.0));
    z
}
