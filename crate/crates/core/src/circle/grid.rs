use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Uniform grid `theta_k = 2 pi k / N` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub const DEFAULT_SIZE: usize = 256;

    pub fn new(size: usize) -> Result<Self> {
        if size < 8 || !size.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= 8, got {size}"
            )));
        }
        Ok(CircleGrid { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.size as f64
    }

    pub fn node(&self, k: usize) -> C64 {
        C64::from_polar(1.0, self.angle(k))
    }

    pub fn nodes(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.size).map(|k| self.node(k))
    }

    /// Trapezoidal weight of a node for a measure of total mass `2 pi`.
    pub fn weight(&self) -> f64 {
        TAU / self.size as f64
    }

    /// Highest Taylor degree recoverable without aliasing.
    pub fn max_degree(&self) -> usize {
        self.size / 2 - 1
    }

    /// Index of the node closest to angle `theta`.
    pub fn nearest_node(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(TAU) / self.weight();
        (t.round() as usize) % self.size
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        CircleGrid {
            size: Self::DEFAULT_SIZE,
        }
    }
}

impl TryFrom<usize> for CircleGrid {
    type Error = Error;
    fn try_from(size: usize) -> Result<Self> {
        CircleGrid::new(size)
    }
}

impl From<CircleGrid> for usize {
    fn from(g: CircleGrid) -> usize {
        g.size
    }
}
