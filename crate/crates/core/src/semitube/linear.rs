use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scan::sample_boundary;
use super::SemitubeBase;
use crate::{Error, Execution, Result, C64};

/// `codim 1: x_{2n-1} = a_{2n-1} - b.(x' - a')`;
/// `codim 2: b.(x' - a') = b~.(x' - a') = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealAffineSubspace {
    pub codim: u8,
    pub anchor: Vec<f64>,
    pub b: Vec<f64>,
    pub b_tilde: Vec<f64>,
}

fn rotate(b: &[f64]) -> Vec<f64> {
    b.chunks(2).flat_map(|p| [-p[1], p[0]]).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn hyperplane_from_b(a: &[f64], b: &[f64], codim: u8) -> Result<RealAffineSubspace> {
    if a.len() < 3 || a.len().is_multiple_of(2) || b.len() + 1 != a.len() {
        return Err(Error::Argument(format!(
            "need a in R^(2n-1) and b in R^(2n-2), got lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    check_b(b, codim)?;
    Ok(RealAffineSubspace {
        codim,
        anchor: a.to_vec(),
        b: b.to_vec(),
        b_tilde: rotate(b),
    })
}

fn check_b(b: &[f64], codim: u8) -> Result<()> {
    match codim {
        1 => Ok(()),
        2 if b.iter().any(|&x| x != 0.0) => Ok(()),
        2 => Err(Error::Argument("codim-2 subspaces need b != 0".into())),
        c => Err(Error::Argument(format!("codim must be 1 or 2, got {c}"))),
    }
}

impl RealAffineSubspace {
    /// Residual of the defining equations at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let k = self.b.len();
        let dx: Vec<f64> = x[..k]
            .iter()
            .zip(&self.anchor)
            .map(|(x, a)| x - a)
            .collect();
        match self.codim {
            1 => (x[k] - (self.anchor[k] - dot(&self.b, &dx))).abs(),
            _ => dot(&self.b, &dx).abs().max(dot(&self.b_tilde, &dx).abs()),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.residual(x) <= tol
    }
}

/// `alpha_j = b_{2j-1} - i b_{2j}`, with `alpha_n = 1` (codim 1) or `0`
/// (codim 2).
pub fn alpha_from_b(b: &[f64], codim: u8) -> Result<Vec<C64>> {
    if b.is_empty() || b.len() % 2 == 1 {
        return Err(Error::Argument(format!(
            "b must have even positive length, got {}",
            b.len()
        )));
    }
    check_b(b, codim)?;
    let mut alpha: Vec<C64> = b.chunks(2).map(|p| C64::new(p[0], -p[1])).collect();
    alpha.push(C64::new(if codim == 1 { 1.0 } else { 0.0 }, 0.0));
    Ok(alpha)
}

/// Inverse of [`alpha_from_b`]; a nonzero `alpha_n` is first scaled to 1.
pub fn b_from_alpha(alpha: &[C64]) -> Result<Vec<f64>> {
    if alpha.len() < 2 {
        return Err(Error::Argument(
            "alpha must have at least two entries".into(),
        ));
    }
    if alpha.iter().all(|a| a.norm_sqr() == 0.0) {
        return Err(Error::Argument("alpha is zero".into()));
    }
    let n = alpha.len();
    let last = alpha[n - 1];
    let scale = if last.norm_sqr() != 0.0 {
        last
    } else {
        C64::new(1.0, 0.0)
    };
    Ok(alpha[..n - 1]
        .iter()
        .flat_map(|a| {
            let a = a / scale;
            [a.re, -a.im]
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearScanConfig {
    pub exterior: usize,
    pub seed: u64,
    /// Angular step of the normal grid on the upper hemisphere, in degrees.
    pub grid_step_deg: f64,
    /// Samples per axis when testing a candidate subspace against the base.
    pub plane_samples: usize,
    /// Outward offset of the exterior points, as a fraction of the bbox diameter.
    pub offset: f64,
    pub execution: Execution,
}

impl Default for LinearScanConfig {
    fn default() -> Self {
        LinearScanConfig {
            exterior: 50,
            seed: 0,
            grid_step_deg: 2.0,
            plane_samples: 96,
            offset: 0.01,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorResult {
    pub point: Vec<f64>,
    pub subspace: Option<RealAffineSubspace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearScanReport {
    pub points: Vec<ExteriorResult>,
    pub successes: usize,
    pub failures: usize,
}

impl LinearScanReport {
    pub fn all_succeeded(&self) -> bool {
        self.failures == 0
    }
}

struct Probe {
    /// Shuffled offsets in `[0, 1]^2` for plane sampling.
    grid: Vec<(f64, f64)>,
    heights: usize,
}

impl Probe {
    fn new(samples: usize) -> Self {
        let mut grid: Vec<(f64, f64)> = (0..samples * samples)
            .map(|p| {
                let f = |k: usize| (k as f64 + 0.5) / samples as f64;
                (f(p % samples), f(p / samples))
            })
            .collect();
        grid.shuffle(&mut ChaCha8Rng::seed_from_u64(0));
        Probe {
            grid,
            heights: 2 * samples,
        }
    }

    /// Samples the plane as a graph over the two coordinates with the
    /// smallest normal components, so every slope is at most 1.
    fn plane_misses(&self, base: &SemitubeBase, a: &[f64], normal: &[f64; 3]) -> bool {
        let k = (0..3)
            .max_by(|&i, &j| normal[i].abs().total_cmp(&normal[j].abs()))
            .unwrap_or(2);
        let (p, q) = ((k + 1) % 3, (k + 2) % 3);
        let (bp, bq) = (base.bbox[p], base.bbox[q]);
        self.grid.iter().all(|&(s, t)| {
            let mut x = [0.0; 3];
            x[p] = bp.0 + s * (bp.1 - bp.0);
            x[q] = bq.0 + t * (bq.1 - bq.0);
            x[k] = a[k] - (normal[p] * (x[p] - a[p]) + normal[q] * (x[q] - a[q])) / normal[k];
            !base.contains(&x)
        })
    }

    fn fiber_misses(&self, base: &SemitubeBase, a: &[f64]) -> bool {
        let (lo, hi) = base.bbox[2];
        let (lo, hi) = (lo - 0.5 * (hi - lo), hi + 0.5 * (hi - lo));
        (0..self.heights).all(|k| {
            let z = lo + (hi - lo) * (k as f64 + 0.5) / self.heights as f64;
            !base.contains(&[a[0], a[1], z])
        })
    }
}

/// Unit normals with positive last coordinate on a latitude/longitude grid.
fn hemisphere(step_deg: f64) -> Vec<[f64; 3]> {
    let step = step_deg.to_radians();
    let mut out = vec![[0.0, 0.0, 1.0]];
    let mut polar = step;
    while polar < 0.5 * std::f64::consts::PI - 1e-9 {
        let mut az = 0.0;
        while az < std::f64::consts::TAU - 1e-9 {
            out.push([polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos()]);
            az += step;
        }
        polar += step;
    }
    out
}

fn search(
    base: &SemitubeBase,
    a: &[f64],
    hint: &[f64],
    normals: &[[f64; 3]],
    probe: &Probe,
) -> Option<RealAffineSubspace> {
    let mut order: Vec<(f64, usize)> = normals
        .iter()
        .enumerate()
        .map(|(i, v)| (-dot(v, hint).abs(), i))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    for (_, i) in order {
        let v = normals[i];
        if probe.plane_misses(base, a, &v) {
            return hyperplane_from_b(a, &[v[0] / v[2], v[1] / v[2]], 1).ok();
        }
    }
    if probe.fiber_misses(base, a) {
        return hyperplane_from_b(a, &[1.0, 0.0], 2).ok();
    }
    None
}

fn require_n2(base: &SemitubeBase) -> Result<()> {
    if base.n != 2 {
        return Err(Error::Config(format!(
            "linear convexity scans support n = 2 bases only, got n = {}",
            base.n
        )));
    }
    Ok(())
}

/// Looks for a subspace of either form through `a` that misses the base:
/// codim-1 planes over the normal grid first (ordered by alignment with
/// `hint`), then the vertical line over `a'`.
pub fn linear_convexity_at(
    base: &SemitubeBase,
    a: &[f64],
    hint: Option<&[f64]>,
    config: &LinearScanConfig,
) -> Result<Option<RealAffineSubspace>> {
    require_n2(base)?;
    if a.len() != 3 {
        return Err(Error::Argument("exterior point must lie in R^3".into()));
    }
    let normals = hemisphere(config.grid_step_deg);
    let probe = Probe::new(config.plane_samples);
    Ok(search(
        base,
        a,
        hint.unwrap_or(&[0.0, 0.0, 1.0]),
        &normals,
        &probe,
    ))
}

/// Samples exterior points just outside the boundary and searches each for
/// a separating subspace.
pub fn linear_convexity_scan(
    base: &SemitubeBase,
    config: &LinearScanConfig,
) -> Result<LinearScanReport> {
    require_n2(base)?;
    if !(config.grid_step_deg > 0.0 && config.grid_step_deg <= 45.0) || config.plane_samples < 2 {
        return Err(Error::Config(
            "grid step must lie in (0, 45] degrees and plane samples >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let push = config.offset * base.diameter();
    let mut points = Vec::with_capacity(config.exterior);
    let mut attempts = 0;
    while points.len() < config.exterior {
        attempts += 1;
        if attempts > 100 * config.exterior.max(1) {
            return Err(Error::Config(format!(
                "could not sample exterior points of base {:?}",
                base.name
            )));
        }
        let (b, u) = sample_boundary(base, &mut rng)?;
        let a: Vec<f64> = b.iter().zip(&u).map(|(x, u)| x + push * u).collect();
        if !base.contains(&a) {
            points.push((a, u));
        }
    }
    let normals = hemisphere(config.grid_step_deg);
    let probe = Probe::new(config.plane_samples);
    let found = config
        .execution
        .map_slice(&points, |(a, u)| search(base, a, u, &normals, &probe));
    let points: Vec<ExteriorResult> = points
        .into_iter()
        .zip(found)
        .map(|((point, _), subspace)| ExteriorResult { point, subspace })
        .collect();
    let successes = points.iter().filter(|p| p.subspace.is_some()).count();
    Ok(LinearScanReport {
        failures: points.len() - successes,
        successes,
        points,
    })
}
