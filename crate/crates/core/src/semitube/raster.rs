use serde::{Deserialize, Serialize};

use super::{project_pi, SemitubeBase};
use crate::{Error, Result, C64};

/// Affine complex line `{anchor + t direction : t in C}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLine {
    anchor: Vec<C64>,
    direction: Vec<C64>,
}

impl ComplexLine {
    pub fn new(anchor: Vec<C64>, direction: Vec<C64>) -> Result<Self> {
        if anchor.len() != direction.len() || anchor.len() < 2 {
            return Err(Error::Argument(format!(
                "anchor and direction must live in the same C^n with n >= 2 (got {} and {})",
                anchor.len(),
                direction.len()
            )));
        }
        if direction.iter().all(|d| d.norm_sqr() == 0.0) {
            return Err(Error::Argument("line direction is zero".into()));
        }
        Ok(ComplexLine { anchor, direction })
    }

    pub fn anchor(&self) -> &[C64] {
        &self.anchor
    }

    pub fn direction(&self) -> &[C64] {
        &self.direction
    }

    pub fn n(&self) -> usize {
        self.anchor.len()
    }

    pub fn point(&self, t: C64) -> Vec<C64> {
        self.anchor
            .iter()
            .zip(&self.direction)
            .map(|(a, v)| a + t * v)
            .collect()
    }

    pub fn translated(&self, shift: &[C64]) -> ComplexLine {
        ComplexLine {
            anchor: self.anchor.iter().zip(shift).map(|(a, w)| a + w).collect(),
            direction: self.direction.clone(),
        }
    }
}

/// Sampling window `[-R, R]^2` in the line parameter and its pixel count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterConfig {
    pub half_width: f64,
    pub resolution: usize,
}

impl RasterConfig {
    pub const MIN_RESOLUTION: usize = 64;
    pub const DEFAULT_RESOLUTION: usize = 256;

    pub fn new(half_width: f64, resolution: usize) -> Result<Self> {
        let cfg = RasterConfig {
            half_width,
            resolution,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `R = 8 diam(bbox)`, `m = 256`.
    pub fn for_base(base: &SemitubeBase) -> Self {
        RasterConfig {
            half_width: 8.0 * base.diameter(),
            resolution: Self::DEFAULT_RESOLUTION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::Config(format!(
                "raster half-width must be positive, got {}",
                self.half_width
            )));
        }
        if self.resolution < Self::MIN_RESOLUTION {
            return Err(Error::Config(format!(
                "raster resolution must be at least {}, got {}",
                Self::MIN_RESOLUTION,
                self.resolution
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: usize) -> Self {
        RasterConfig {
            half_width: self.half_width,
            resolution: self.resolution * factor,
        }
    }

    /// Parameter value at the center of pixel `i`.
    pub fn center(&self, i: usize) -> f64 {
        let h = 2.0 * self.half_width / self.resolution as f64;
        -self.half_width + (i as f64 + 0.5) * h
    }
}

/// Frame sides, in the order used by [`SectionRaster::sides`].
pub const SIDES: [&str; 4] = ["left", "right", "bottom", "top"];

/// Occupancy of `L cap S_B` on an `m x m` pixel grid. Row `j` holds
/// `Im t`, column `i` holds `Re t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionRaster {
    pub config: RasterConfig,
    occupied: Vec<bool>,
    sides: [bool; 4],
}

impl SectionRaster {
    /// Builds a raster from a row-major mask.
    pub fn from_mask(config: RasterConfig, occupied: Vec<bool>) -> Result<Self> {
        config.validate()?;
        let m = config.resolution;
        if occupied.len() != m * m {
            return Err(Error::Argument(format!(
                "mask has {} pixels, expected {}",
                occupied.len(),
                m * m
            )));
        }
        let mut sides = [false; 4];
        for k in 0..m {
            sides[0] |= occupied[k * m];
            sides[1] |= occupied[k * m + m - 1];
            sides[2] |= occupied[k];
            sides[3] |= occupied[(m - 1) * m + k];
        }
        Ok(SectionRaster {
            config,
            occupied,
            sides,
        })
    }

    pub fn resolution(&self) -> usize {
        self.config.resolution
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.occupied[j * self.config.resolution + i]
    }

    pub fn mask(&self) -> &[bool] {
        &self.occupied
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Which frame sides the occupancy touches, see [`SIDES`].
    pub fn sides(&self) -> [bool; 4] {
        self.sides
    }

    pub fn sides_touched(&self) -> usize {
        self.sides.iter().filter(|&&s| s).count()
    }

    /// The section reaches the window frame.
    pub fn truncated(&self) -> bool {
        self.sides_touched() > 0
    }
}

/// Rasterizes `{t : Pi(anchor + t v) in B}` over the window of `config`.
pub fn line_section(
    base: &SemitubeBase,
    line: &ComplexLine,
    config: &RasterConfig,
) -> Result<SectionRaster> {
    config.validate()?;
    if line.n() != base.n {
        return Err(Error::Argument(format!(
            "line lives in C^{} but the base is for n = {}",
            line.n(),
            base.n
        )));
    }
    // Pi is real linear: Pi(a + (s + iu) v) = Pi(a) + s Pi(v) + u Pi(iv).
    let p0 = project_pi(line.anchor());
    let ps = project_pi(line.direction());
    let iv: Vec<C64> = line.direction().iter().map(|v| v * C64::i()).collect();
    let pu = project_pi(&iv);
    let m = config.resolution;
    let centers: Vec<f64> = (0..m).map(|i| config.center(i)).collect();
    let mut occupied = vec![false; m * m];
    let mut x = vec![0.0; p0.len()];
    for (j, &u) in centers.iter().enumerate() {
        for (i, &s) in centers.iter().enumerate() {
            for k in 0..x.len() {
                x[k] = p0[k] + s * ps[k] + u * pu[k];
            }
            occupied[j * m + i] = base.contains(&x);
        }
    }
    SectionRaster::from_mask(*config, occupied)
}
