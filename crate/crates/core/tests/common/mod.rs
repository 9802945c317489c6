#![allow(dead_code)]

use std::f64::consts::TAU;

use geolab_core::circle::{Atom, CircleGrid};
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::{reconstruct, GeodesicCandidate};
use geolab_core::hclass::{Constrained, HParams};
use geolab_core::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn grid() -> CircleGrid {
    CircleGrid::new(256).unwrap()
}

/// `h = (1, pair a = 0, b = 1)` on the semiball.
pub fn semiball_h() -> HParams {
    HParams::new(
        vec![vec![c(1.0, 0.0)]],
        vec![Constrained::pair(c(0.0, 0.0), 1.0)],
    )
    .unwrap()
}

pub fn semiball() -> GeodesicCandidate {
    let dom = DomainDescriptor::builtin("semiball").unwrap();
    reconstruct(&dom, &semiball_h(), grid(), &[], &[0.0]).unwrap()
}

/// `h = (zeta^2, 0)` on the semiball.
pub fn conjugate_h() -> HParams {
    HParams::new(
        vec![vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]],
        vec![Constrained::pair(c(0.0, 0.0), 0.0)],
    )
    .unwrap()
}

/// `h = (0, positive sign -1, c = 1, d = 1)` on the paraboloid.
pub fn cayley_h() -> HParams {
    HParams::new(
        vec![vec![c(0.0, 0.0)]],
        vec![Constrained::positive(-1, 1.0, c(1.0, 0.0))],
    )
    .unwrap()
}

pub fn cayley_atom() -> Atom {
    Atom::new(0.0, TAU, vec![1.0]).unwrap()
}

pub fn cayley() -> GeodesicCandidate {
    let dom = DomainDescriptor::builtin("paraboloid").unwrap();
    reconstruct(&dom, &cayley_h(), grid(), &[cayley_atom()], &[0.0]).unwrap()
}

pub const DOMAINS: [&str; 4] = ["semiball", "paraboloid", "ball", "tube_square"];
