use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Building block of analytic bases. Membership is strict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    /// `sum ((x_i - c_i) k_i)^2 < 1`; `k_i = 0` drops coordinate `i`.
    Ellipsoid {
        center: Vec<f64>,
        inv_radii: Vec<f64>,
    },
    /// `normal . x < offset`.
    HalfSpace { normal: Vec<f64>, offset: f64 },
}

impl Primitive {
    fn dim(&self) -> usize {
        match self {
            Primitive::Ellipsoid { center, .. } => center.len(),
            Primitive::HalfSpace { normal, .. } => normal.len(),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let ok = match self {
            Primitive::Ellipsoid { center, inv_radii } => {
                center.len() == dim && inv_radii.len() == dim
            }
            Primitive::HalfSpace { normal, .. } => normal.len() == dim,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "primitive has dimension {}, base has {dim}",
                self.dim()
            )))
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        match self {
            Primitive::Ellipsoid { center, inv_radii } => {
                let s: f64 = x
                    .iter()
                    .zip(center)
                    .zip(inv_radii)
                    .map(|((x, c), k)| ((x - c) * k).powi(2))
                    .sum();
                s < 1.0
            }
            Primitive::HalfSpace { normal, offset } => {
                x.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() < *offset
            }
        }
    }

    fn translated(&self, w: &[f64]) -> Primitive {
        match self {
            Primitive::Ellipsoid { center, inv_radii } => Primitive::Ellipsoid {
                center: center.iter().zip(w).map(|(c, w)| c + w).collect(),
                inv_radii: inv_radii.clone(),
            },
            Primitive::HalfSpace { normal, offset } => Primitive::HalfSpace {
                normal: normal.clone(),
                offset: offset + normal.iter().zip(w).map(|(a, b)| a * b).sum::<f64>(),
            },
        }
    }
}

/// Occupancy grid over the bounding box, row-major with the first axis
/// varying slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoxelGrid {
    pub resolution: Vec<usize>,
    pub occupancy: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseRepr {
    /// Union of intersections of primitives.
    Analytic {
        inequalities: Vec<Vec<Primitive>>,
    },
    Voxel {
        grid: VoxelGrid,
    },
}

/// A domain `B` in `R^{2n-1}`; the semitube is `Pi^{-1}(B)` in `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BaseRecord")]
pub struct SemitubeBase {
    pub name: String,
    pub n: usize,
    /// Per-axis `(lo, hi)`. Contains the closure of a voxel base; for bases
    /// that are unbounded along some axis it is a nominal sampling window.
    pub bbox: Vec<(f64, f64)>,
    #[serde(flatten)]
    pub repr: BaseRepr,
}

#[derive(Deserialize)]
struct BaseRecord {
    #[serde(default = "default_name")]
    name: String,
    n: usize,
    bbox: Vec<(f64, f64)>,
    #[serde(flatten)]
    repr: BaseRepr,
}

fn default_name() -> String {
    "custom".into()
}

impl TryFrom<BaseRecord> for SemitubeBase {
    type Error = Error;
    fn try_from(r: BaseRecord) -> Result<Self> {
        SemitubeBase::new(r.name, r.n, r.bbox, r.repr)
    }
}

impl SemitubeBase {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        bbox: Vec<(f64, f64)>,
        repr: BaseRepr,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!(
                "semitube bases need n >= 2, got {n}"
            )));
        }
        let dim = 2 * n - 1;
        if bbox.len() != dim || bbox.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Config(format!(
                "bbox must list {dim} nonempty intervals"
            )));
        }
        match &repr {
            BaseRepr::Analytic { inequalities } => {
                if inequalities.is_empty() {
                    return Err(Error::Config(
                        "analytic base needs at least one piece".into(),
                    ));
                }
                for p in inequalities.iter().flatten() {
                    p.check(dim)?;
                }
            }
            BaseRepr::Voxel { grid } => {
                if grid.resolution.len() != dim || grid.resolution.contains(&0) {
                    return Err(Error::Config(format!(
                        "voxel resolution must list {dim} positive sizes"
                    )));
                }
                if grid.occupancy.len() != grid.resolution.iter().product::<usize>() {
                    return Err(Error::Config(
                        "voxel occupancy length does not match the resolution".into(),
                    ));
                }
            }
        }
        Ok(SemitubeBase {
            name: name.into(),
            n,
            bbox,
            repr,
        })
    }

    /// Unit ball in `R^3`.
    pub fn ball() -> Self {
        let repr = BaseRepr::Analytic {
            inequalities: vec![vec![Primitive::Ellipsoid {
                center: vec![0.0; 3],
                inv_radii: vec![1.0; 3],
            }]],
        };
        SemitubeBase::new("ball", 2, vec![(-1.0, 1.0); 3], repr).expect("static base")
    }

    /// Unit balls at `(+-2, 0, 0)` joined by a cylinder of radius
    /// [`DUMBBELL_NECK`] around the `x_1` axis.
    pub fn dumbbell() -> Self {
        let r = DUMBBELL_NECK;
        let ball = |c: f64| Primitive::Ellipsoid {
            center: vec![c, 0.0, 0.0],
            inv_radii: vec![1.0; 3],
        };
        let repr = BaseRepr::Analytic {
            inequalities: vec![
                vec![ball(-2.0)],
                vec![ball(2.0)],
                vec![
                    Primitive::Ellipsoid {
                        center: vec![0.0; 3],
                        inv_radii: vec![0.0, 1.0 / r, 1.0 / r],
                    },
                    Primitive::HalfSpace {
                        normal: vec![1.0, 0.0, 0.0],
                        offset: 2.0,
                    },
                    Primitive::HalfSpace {
                        normal: vec![-1.0, 0.0, 0.0],
                        offset: 2.0,
                    },
                ],
            ],
        };
        SemitubeBase::new(
            "dumbbell",
            2,
            vec![(-3.0, 3.0), (-1.0, 1.0), (-1.0, 1.0)],
            repr,
        )
        .expect("static base")
    }

    /// `(unit disc minus {|x_2| <= w, x_1 >= 0}) x R` with `w` =
    /// [`SLIT_HALF_WIDTH`]: non-convex, but C-convex as a planar domain.
    pub fn slit_disc() -> Self {
        let disc = || Primitive::Ellipsoid {
            center: vec![0.0; 3],
            inv_radii: vec![1.0, 1.0, 0.0],
        };
        let half = |normal: [f64; 3], offset: f64| Primitive::HalfSpace {
            normal: normal.to_vec(),
            offset,
        };
        let w = SLIT_HALF_WIDTH;
        let repr = BaseRepr::Analytic {
            inequalities: vec![
                vec![disc(), half([0.0, -1.0, 0.0], -w)],
                vec![disc(), half([0.0, 1.0, 0.0], -w)],
                vec![disc(), half([1.0, 0.0, 0.0], 0.0)],
            ],
        };
        SemitubeBase::new("slit_disc", 2, vec![(-1.0, 1.0); 3], repr).expect("static base")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "ball" => Ok(Self::ball()),
            "dumbbell" => Ok(Self::dumbbell()),
            "slit_disc" => Ok(Self::slit_disc()),
            other => Err(Error::Config(format!(
                "unknown built-in base {other:?} (expected ball, dumbbell, slit_disc)"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n - 1
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.repr {
            BaseRepr::Analytic { inequalities } => inequalities
                .iter()
                .any(|piece| piece.iter().all(|p| p.contains(x))),
            BaseRepr::Voxel { grid } => {
                let mut index = 0;
                for ((&xi, &(lo, hi)), &r) in x.iter().zip(&self.bbox).zip(&grid.resolution) {
                    if !(xi > lo && xi < hi) {
                        return false;
                    }
                    let cell = (((xi - lo) / (hi - lo)) * r as f64) as usize;
                    index = index * r + cell.min(r - 1);
                }
                grid.occupancy[index]
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        self.bbox
            .iter()
            .map(|(lo, hi)| (hi - lo).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// The base shifted by `w`.
    pub fn translated(&self, w: &[f64]) -> SemitubeBase {
        let bbox = self
            .bbox
            .iter()
            .zip(w)
            .map(|((lo, hi), w)| (lo + w, hi + w))
            .collect();
        let repr = match &self.repr {
            BaseRepr::Analytic { inequalities } => BaseRepr::Analytic {
                inequalities: inequalities
                    .iter()
                    .map(|piece| piece.iter().map(|p| p.translated(w)).collect())
                    .collect(),
            },
            voxel => voxel.clone(),
        };
        SemitubeBase {
            name: self.name.clone(),
            n: self.n,
            bbox,
            repr,
        }
    }
}

/// Radius of the dumbbell's neck.
pub const DUMBBELL_NECK: f64 = 0.35;

/// Half-width of the slit removed from the disc.
pub const SLIT_HALF_WIDTH: f64 = 0.25;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_membership() {
        let b = SemitubeBase::ball();
        assert!(b.contains(&[0.0, 0.0, 0.0]));
        assert!(!b.contains(&[1.0, 0.0, 0.0]));
        let d = SemitubeBase::dumbbell();
        assert!(d.contains(&[2.0, 0.9, 0.0]));
        assert!(d.contains(&[0.0, 0.3, 0.0]));
        assert!(!d.contains(&[0.0, 0.4, 0.0]));
        assert!(!d.contains(&[0.0, 0.0, DUMBBELL_NECK]));
        let s = SemitubeBase::slit_disc();
        assert!(s.contains(&[-0.5, 0.0, 100.0]));
        assert!(s.contains(&[0.5, 0.5, -7.0]));
        assert!(!s.contains(&[0.5, 0.1, 0.0]));
        assert!(!s.contains(&[0.0, 0.99, 0.0]) || 0.99f64 < 1.0);
    }

    #[test]
    fn voxel_bases_and_json() {
        let grid = VoxelGrid {
            resolution: vec![2, 1, 1],
            occupancy: vec![true, false],
        };
        let v =
            SemitubeBase::new("half", 2, vec![(0.0, 2.0); 3], BaseRepr::Voxel { grid }).unwrap();
        assert!(v.contains(&[0.5, 1.0, 1.0]));
        assert!(!v.contains(&[1.5, 1.0, 1.0]));
        assert!(!v.contains(&[-0.5, 1.0, 1.0]));
        for base in [v, SemitubeBase::dumbbell()] {
            let s = serde_json::to_string(&base).unwrap();
            let back: SemitubeBase = serde_json::from_str(&s).unwrap();
            assert_eq!(back, base);
        }
        assert!(serde_json::from_str::<SemitubeBase>(
            r#"{"n":2,"bbox":[[0,1]],"kind":"analytic","inequalities":[]}"#
        )
        .is_err());
    }

    #[test]
    fn translation_moves_membership() {
        let d = SemitubeBase::dumbbell();
        let w = [0.3, -1.2, 5.0];
        let t = d.translated(&w);
        for x in [
            [2.0, 0.9, 0.0],
            [0.0, 0.3, 0.0],
            [0.0, 0.4, 0.0],
            [1.0, 0.0, 0.2],
        ] {
            let y: Vec<f64> = x.iter().zip(&w).map(|(a, b)| a + b).collect();
            assert_eq!(d.contains(&x), t.contains(&y));
        }
    }
}
