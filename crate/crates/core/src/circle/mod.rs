//! Spectral calculus on the unit circle.
//!
//! Boundary data live on a uniform grid of `N` nodes (`N` a power of two).
//! The Lebesgue measure on the circle has total mass `2 pi`, so every node
//! carries trapezoidal weight `2 pi / N`; point masses (atoms) are never
//! rasterized and enter all formulas in closed form.

mod grid;
mod holo;
mod measure;
mod signal;

pub use grid::CircleGrid;
pub use holo::{split_parts, HoloRep};
pub use measure::{poisson_extend, schwarz_extend, Atom, BoundaryMeasure, DEFAULT_RIM};
pub use signal::{
    fourier_coefficients, hardy_residual, BoundarySignal, CoefficientTable, HardyResidual,
    SignalRecord,
};
