use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::raster::{ComplexLine, RasterConfig, SectionRaster};
use super::topology::{section_topology, SectionTopology, TopologyReport};
use super::{lift_iota, SemitubeBase};
use crate::{Error, Execution, Result, C64};

/// Lines are processed in chunks of this size; the scan stops after the
/// chunk holding the first violation.
const LINE_CHUNK: usize = 64;

/// Bisection steps when locating boundary points.
const BISECTION_STEPS: usize = 50;

/// Rejection-sampling attempts per requested interior point.
const REJECTION_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    pub count: usize,
    pub seed: u64,
    /// Window half-width; `None` means `8 diam(bbox)`.
    pub window: Option<f64>,
    pub resolution: usize,
    pub execution: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            count: 500,
            seed: 0,
            window: None,
            resolution: RasterConfig::DEFAULT_RESOLUTION,
            execution: Execution::Parallel,
        }
    }
}

impl ScanConfig {
    pub fn raster(&self, base: &SemitubeBase) -> Result<RasterConfig> {
        let half_width = self.window.unwrap_or(8.0 * base.diameter());
        RasterConfig::new(half_width, self.resolution)
    }
}

/// A section that is not connected and simply connected at `m`, `2m` and
/// `4m`, without touching the window frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub line: ComplexLine,
    pub topology: SectionTopology,
    /// Counts at `4m`.
    pub confirmation: TopologyReport,
    #[serde(skip)]
    pub raster: Option<SectionRaster>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub lines_requested: usize,
    pub lines_scanned: usize,
    pub clean: usize,
    pub empty: usize,
    pub inconclusive: usize,
    /// Counts changed under resolution doubling.
    pub unstable: usize,
    /// Bad counts on a section that reaches the frame, where clipping alone
    /// can split a connected set.
    pub truncated: usize,
    pub half_width: f64,
    pub resolution: usize,
    pub violation: Option<Violation>,
}

impl ScanReport {
    pub fn violations(&self) -> usize {
        usize::from(self.violation.is_some())
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, bbox: &[(f64, f64)], enlarge: f64) -> Vec<f64> {
    bbox.iter()
        .map(|&(lo, hi)| {
            let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo) * (1.0 + enlarge));
            rng.random_range(c - r..c + r)
        })
        .collect()
}

fn gaussian_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Anchors `iota(x)` with `x` uniform in the bbox enlarged by 10%, directions
/// uniform on the unit sphere of `C^n`.
pub(crate) fn sample_lines(base: &SemitubeBase, count: usize, seed: u64) -> Vec<ComplexLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let anchor = lift_iota(&uniform_in(&mut rng, &base.bbox, 0.1));
            let v = gaussian_unit(&mut rng, 2 * base.n);
            let direction = v.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            ComplexLine::new(anchor, direction).expect("unit direction")
        })
        .collect()
}

pub(crate) fn sample_interior(base: &SemitubeBase, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    for _ in 0..REJECTION_BUDGET {
        let x = uniform_in(rng, &base.bbox, 0.0);
        if base.contains(&x) {
            return Ok(x);
        }
    }
    Err(Error::Config(format!(
        "could not sample an interior point of base {:?}",
        base.name
    )))
}

/// A boundary point on a random ray from a random interior point, with the
/// unit ray direction. The point is the outer end of the final bracket.
pub(crate) fn sample_boundary(
    base: &SemitubeBase,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let reach = 2.0 * base.diameter();
    for _ in 0..REJECTION_BUDGET {
        let p = sample_interior(base, rng)?;
        let u = gaussian_unit(rng, p.len());
        let at = |t: f64| -> Vec<f64> { p.iter().zip(&u).map(|(a, b)| a + t * b).collect() };
        if base.contains(&at(reach)) {
            continue;
        }
        let (mut inside, mut outside) = (0.0, reach);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (inside + outside);
            if base.contains(&at(mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return Ok((at(outside), u));
    }
    Err(Error::Config(format!(
        "could not locate boundary points of base {:?}",
        base.name
    )))
}

enum Outcome {
    Empty,
    Inconclusive,
    Unstable,
    Clean,
    Truncated,
    Candidate(SectionRaster, SectionTopology),
}

fn classify(base: &SemitubeBase, line: &ComplexLine, raster: &RasterConfig) -> Result<Outcome> {
    let (r, topo) = section_topology(base, line, raster)?;
    Ok(if topo.report.is_empty() {
        Outcome::Empty
    } else if topo.report.inconclusive {
        Outcome::Inconclusive
    } else if !topo.stable {
        Outcome::Unstable
    } else if topo.report.is_clean() {
        Outcome::Clean
    } else if topo.report.sides_touched > 0 {
        Outcome::Truncated
    } else {
        Outcome::Candidate(r, topo)
    })
}

/// Samples complex lines near the semitube and reports the first section
/// that is not connected and simply connected.
pub fn cconvexity_scan(base: &SemitubeBase, config: &ScanConfig) -> Result<ScanReport> {
    let raster = config.raster(base)?;
    let lines = sample_lines(base, config.count, config.seed);
    let mut report = ScanReport {
        lines_requested: config.count,
        lines_scanned: 0,
        clean: 0,
        empty: 0,
        inconclusive: 0,
        unstable: 0,
        truncated: 0,
        half_width: raster.half_width,
        resolution: raster.resolution,
        violation: None,
    };
    for (c, chunk) in lines.chunks(LINE_CHUNK).enumerate() {
        let outcomes = config
            .execution
            .map_slice(chunk, |line| classify(base, line, &raster));
        for (k, outcome) in outcomes.into_iter().enumerate() {
            let index = c * LINE_CHUNK + k;
            report.lines_scanned += 1;
            match outcome? {
                Outcome::Empty => report.empty += 1,
                Outcome::Inconclusive => report.inconclusive += 1,
                Outcome::Unstable => report.unstable += 1,
                Outcome::Clean => report.clean += 1,
                Outcome::Truncated => report.truncated += 1,
                Outcome::Candidate(r, topo) => {
                    if report.violation.is_some() {
                        continue;
                    }
                    let confirmation = super::topology::topology(&super::raster::line_section(
                        base,
                        &chunk[k],
                        &raster.scaled(4),
                    )?);
                    if confirmation.agrees_with(&topo.report) {
                        report.violation = Some(Violation {
                            index,
                            line: chunk[k].clone(),
                            topology: topo,
                            confirmation,
                            raster: Some(r),
                        });
                    } else {
                        report.unstable += 1;
                    }
                }
            }
        }
        if report.violation.is_some() {
            break;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvexityConfig {
    pub pairs: usize,
    pub seed: u64,
}

impl Default for ConvexityConfig {
    fn default() -> Self {
        ConvexityConfig {
            pairs: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    /// No sampled midpoint left the base.
    pub convex: bool,
    pub pairs_tested: usize,
    /// `[x, y, (x + y) / 2]` for the first failing pair.
    pub witness: Option<[Vec<f64>; 3]>,
}

/// Midpoint test on random pairs of base points.
pub fn convexity_check(base: &SemitubeBase, config: &ConvexityConfig) -> Result<ConvexityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for k in 0..config.pairs {
        let x = sample_interior(base, &mut rng)?;
        let y = sample_interior(base, &mut rng)?;
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        if !base.contains(&mid) {
            return Ok(ConvexityReport {
                convex: false,
                pairs_tested: k + 1,
                witness: Some([x, y, mid]),
            });
        }
    }
    Ok(ConvexityReport {
        convex: true,
        pairs_tested: config.pairs,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberConfig {
    pub points: usize,
    pub heights: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for FiberConfig {
    fn default() -> Self {
        FiberConfig {
            points: 50,
            heights: 100,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    /// No sampled vertical fiber lies entirely in the boundary.
    pub holds: bool,
    pub points_tested: usize,
    /// Boundary point whose whole fiber sits in the boundary.
    pub witness: Option<Vec<f64>>,
}

/// Checks that vertical fibers `{x : x' = a'}` over sampled boundary points
/// leave the boundary. A fiber point counts as a boundary point when the
/// stencil `x +- delta e_k`, `delta = diam / 256`, sees both the base and
/// its complement.
pub fn fiber_condition_check(base: &SemitubeBase, config: &FiberConfig) -> Result<FiberReport> {
    if config.heights < 2 {
        return Err(Error::Config(
            "fiber check needs at least two heights".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = (0..config.points)
        .map(|_| sample_boundary(base, &mut rng).map(|(a, _)| a))
        .collect::<Result<Vec<_>>>()?;
    let last = base.dim() - 1;
    let (lo, hi) = base.bbox[last];
    let (lo, hi) = (lo - 0.5 * (hi - lo), hi + 0.5 * (hi - lo));
    let delta = base.diameter() / 256.0;
    let on_boundary = |x: &mut Vec<f64>| -> bool {
        let mut seen = [false; 2];
        seen[usize::from(base.contains(x))] = true;
        for k in 0..x.len() {
            let keep = x[k];
            for s in [-delta, delta] {
                x[k] = keep + s;
                seen[usize::from(base.contains(x))] = true;
            }
            x[k] = keep;
        }
        seen[0] && seen[1]
    };
    let in_boundary = config.execution.map_slice(&points, |a| {
        let mut x = a.clone();
        (0..config.heights).all(|k| {
            x[last] = lo + (hi - lo) * k as f64 / (config.heights - 1) as f64;
            on_boundary(&mut x)
        })
    });
    let witness = in_boundary
        .iter()
        .position(|&b| b)
        .map(|i| points[i].clone());
    Ok(FiberReport {
        holds: witness.is_none(),
        points_tested: points.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convexity_fixtures() {
        let cfg = ConvexityConfig::default();
        assert!(convexity_check(&SemitubeBase::ball(), &cfg).unwrap().convex);
        for base in [SemitubeBase::slit_disc(), SemitubeBase::dumbbell()] {
            let r = convexity_check(&base, &cfg).unwrap();
            assert!(!r.convex, "{}", base.name);
            let [x, y, mid] = r.witness.unwrap();
            assert!(base.contains(&x) && base.contains(&y) && !base.contains(&mid));
        }
    }

    #[test]
    fn fiber_fixtures() {
        let cfg = FiberConfig::default();
        assert!(
            fiber_condition_check(&SemitubeBase::ball(), &cfg)
                .unwrap()
                .holds
        );
        assert!(
            fiber_condition_check(&SemitubeBase::dumbbell(), &cfg)
                .unwrap()
                .holds
        );
        let slit = fiber_condition_check(&SemitubeBase::slit_disc(), &cfg).unwrap();
        assert!(!slit.holds);
        assert!(slit.witness.is_some());
    }

    #[test]
    fn boundary_points_are_on_the_boundary() {
        let base = SemitubeBase::ball();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (a, _) = sample_boundary(&base, &mut rng).unwrap();
            let r = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_scan_is_clean_and_sequential_agrees() {
        let base = SemitubeBase::ball();
        let cfg = ScanConfig {
            count: 64,
            resolution: 64,
            ..ScanConfig::default()
        };
        let par = cconvexity_scan(&base, &cfg).unwrap();
        assert!(par.violation.is_none());
        assert!(par.clean > 0);
        let seq = cconvexity_scan(
            &base,
            &ScanConfig {
                execution: Execution::Sequential,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }
}
