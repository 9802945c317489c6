//! Built-in convex domains: membership with a signed margin, the cones
//! `W_D` and `S_D`, and closed-form support maps `P_D(v)`.
//!
//! A support direction `v` lives in `C^{n-d} x R^d` and `P_D(v)` is the set
//! of boundary points `p` with `Re((z - p) . v) < 0` for every `z` in the
//! domain (bilinear dot product).

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Mixed, Result, C64};

/// Near-boundary samples have margin in `(0, NEAR_BOUNDARY_MARGIN)`.
pub const NEAR_BOUNDARY_MARGIN: f64 = 0.05;

const VERTEX_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DescriptorRecord", into = "DescriptorRecord")]
pub struct DomainDescriptor {
    n: usize,
    d: usize,
    kind: DomainKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    /// `sum |z_head|^2 + sum (Re z_tail)^2 < r^2`.
    Semiball { radius: f64 },
    /// `Re z_n > sum_{j<n} |z_j|^2` (so `d = 1`).
    Paraboloid,
    /// `sum |z|^2 < r^2` (so `d = 0`).
    EuclideanBall { radius: f64 },
    /// `(Re z_1, Re z_2)` in the interior of a convex polygon (`n = d = 2`).
    /// Vertices are stored counterclockwise.
    TubePolygon { vertices: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorRecord {
    kind: String,
    n: usize,
    d: usize,
    #[serde(default)]
    parameters: Parameters,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
}

impl TryFrom<DescriptorRecord> for DomainDescriptor {
    type Error = Error;
    fn try_from(r: DescriptorRecord) -> Result<Self> {
        let radius = r.parameters.radius.unwrap_or(1.0);
        let dom = match r.kind.as_str() {
            "semiball" => DomainDescriptor::semiball(r.n, r.d, radius)?,
            "paraboloid" => DomainDescriptor::paraboloid(r.n)?,
            "euclidean_ball" => DomainDescriptor::euclidean_ball(r.n, radius)?,
            "tube_polygon" => {
                DomainDescriptor::tube_polygon(r.parameters.vertices.ok_or_else(|| {
                    Error::Config("tube_polygon needs parameters.vertices".into())
                })?)?
            }
            other => return Err(Error::Config(format!("unknown domain kind {other:?}"))),
        };
        if (dom.n, dom.d) != (r.n, r.d) {
            return Err(Error::Config(format!(
                "{} has (n, d) = ({}, {}), descriptor says ({}, {})",
                r.kind, dom.n, dom.d, r.n, r.d
            )));
        }
        Ok(dom)
    }
}

impl From<DomainDescriptor> for DescriptorRecord {
    fn from(dom: DomainDescriptor) -> Self {
        let (kind, parameters) = match dom.kind {
            DomainKind::Semiball { radius } => (
                "semiball",
                Parameters {
                    radius: Some(radius),
                    vertices: None,
                },
            ),
            DomainKind::Paraboloid => ("paraboloid", Parameters::default()),
            DomainKind::EuclideanBall { radius } => (
                "euclidean_ball",
                Parameters {
                    radius: Some(radius),
                    vertices: None,
                },
            ),
            DomainKind::TubePolygon { vertices } => (
                "tube_polygon",
                Parameters {
                    radius: None,
                    vertices: Some(vertices),
                },
            ),
        };
        DescriptorRecord {
            kind: kind.into(),
            n: dom.n,
            d: dom.d,
            parameters,
        }
    }
}

/// An element of `P_D(v)` together with the queried direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub point: Mixed,
    pub direction: Mixed,
}

/// Membership answer: `inside` iff `margin > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    pub margin: f64,
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{name} must be positive, got {x}")))
    }
}

impl DomainDescriptor {
    pub fn semiball(n: usize, d: usize, radius: f64) -> Result<Self> {
        if n == 0 || d > n {
            return Err(Error::Config(format!(
                "semiball needs 0 <= d <= n, n >= 1; got n = {n}, d = {d}"
            )));
        }
        Ok(DomainDescriptor {
            n,
            d,
            kind: DomainKind::Semiball {
                radius: positive("radius", radius)?,
            },
        })
    }

    pub fn paraboloid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("paraboloid needs n >= 2, got {n}")));
        }
        Ok(DomainDescriptor {
            n,
            d: 1,
            kind: DomainKind::Paraboloid,
        })
    }

    pub fn euclidean_ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("euclidean_ball needs n >= 1".into()));
        }
        Ok(DomainDescriptor {
            n,
            d: 0,
            kind: DomainKind::EuclideanBall {
                radius: positive("radius", radius)?,
            },
        })
    }

    /// Tube over a convex polygon, given in either orientation.
    pub fn tube_polygon(mut vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Config(
                "tube_polygon needs at least 3 vertices".into(),
            ));
        }
        let crosses: Vec<f64> = (0..vertices.len())
            .map(|i| {
                let [a, b, c] = [0, 1, 2].map(|k| vertices[(i + k) % vertices.len()]);
                (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            })
            .collect();
        if crosses.iter().all(|&c| c < 0.0) {
            vertices.reverse();
        } else if !crosses.iter().all(|&c| c > 0.0) {
            return Err(Error::Config(
                "tube_polygon vertices must form a strictly convex polygon".into(),
            ));
        }
        Ok(DomainDescriptor {
            n: 2,
            d: 2,
            kind: DomainKind::TubePolygon { vertices },
        })
    }

    /// `semiball`, `paraboloid`, `ball` or `tube_square`, all in `C^2`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "semiball" => DomainDescriptor::semiball(2, 1, 1.0),
            "paraboloid" => DomainDescriptor::paraboloid(2),
            "ball" | "euclidean_ball" => DomainDescriptor::euclidean_ball(2, 1.0),
            "tube_square" => DomainDescriptor::tube_polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]),
            other => Err(Error::Config(format!(
                "unknown built-in domain {other:?} (expected semiball, paraboloid, ball, tube_square)"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DomainKind::Semiball { .. } => "semiball",
            DomainKind::Paraboloid => "paraboloid",
            DomainKind::EuclideanBall { .. } => "euclidean_ball",
            DomainKind::TubePolygon { .. } => "tube_polygon",
        }
    }

    fn head(&self) -> usize {
        self.n - self.d
    }

    /// Value of the defining function; positive exactly inside.
    pub fn margin(&self, z: &[C64]) -> f64 {
        let k = self.head();
        match &self.kind {
            DomainKind::Semiball { radius } => {
                let h: f64 = z[..k].iter().map(|c| c.norm_sqr()).sum();
                let t: f64 = z[k..].iter().map(|c| c.re * c.re).sum();
                radius * radius - h - t
            }
            DomainKind::Paraboloid => z[k].re - z[..k].iter().map(|c| c.norm_sqr()).sum::<f64>(),
            DomainKind::EuclideanBall { radius } => {
                radius * radius - z.iter().map(|c| c.norm_sqr()).sum::<f64>()
            }
            DomainKind::TubePolygon { vertices } => {
                let x = [z[0].re, z[1].re];
                (0..vertices.len())
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % vertices.len()];
                        let e = [b[0] - a[0], b[1] - a[1]];
                        (e[0] * (x[1] - a[1]) - e[1] * (x[0] - a[0])) / e[0].hypot(e[1])
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains(&self, z: &[C64]) -> Membership {
        let margin = self.margin(z);
        Membership {
            inside: margin > 0.0,
            margin,
        }
    }

    /// Membership of a mixed point `(z_head, Re z_tail)`; the imaginary tail
    /// is irrelevant by construction.
    pub fn margin_mixed(&self, p: &Mixed) -> f64 {
        self.margin(&p.to_complex())
    }

    pub fn in_wd(&self, v: &Mixed) -> bool {
        match self.kind {
            DomainKind::Paraboloid => v.tail[0] < 0.0 || v.is_zero(),
            _ => true,
        }
    }

    pub fn in_sd(&self, y: &[f64]) -> bool {
        match self.kind {
            DomainKind::Paraboloid => y[0] >= 0.0,
            DomainKind::EuclideanBall { .. } => true,
            _ => y.iter().all(|&x| x == 0.0),
        }
    }

    /// Whether `S_D` contains a nonzero vector, so that atoms are possible.
    pub fn has_nontrivial_sd(&self) -> bool {
        matches!(self.kind, DomainKind::Paraboloid)
    }

    /// A unit vector of `S_D` when [`Self::has_nontrivial_sd`] holds.
    pub fn sd_generator(&self) -> Option<Vec<f64>> {
        match self.kind {
            DomainKind::Paraboloid => Some(vec![1.0]),
            _ => None,
        }
    }

    /// Whether the projection onto the first `n - d` coordinates is bounded.
    pub fn bounded_head_projection(&self) -> bool {
        !matches!(self.kind, DomainKind::Paraboloid)
    }

    /// The support point for direction `v`, `None` when `P_D(v)` is empty.
    pub fn support_point(&self, v: &Mixed) -> Result<Option<SupportPoint>> {
        if v.n() != self.n || v.d() != self.d {
            return Err(Error::Argument(format!(
                "direction has shape ({}, {}), domain has ({}, {})",
                v.n(),
                v.d(),
                self.n,
                self.d
            )));
        }
        if v.is_zero() {
            return Err(Error::Argument("support direction must be nonzero".into()));
        }
        let point = match &self.kind {
            DomainKind::Semiball { radius } | DomainKind::EuclideanBall { radius } => {
                let s = radius / v.norm();
                Mixed::new(
                    v.head.iter().map(|c| c.conj() * s).collect(),
                    v.tail.iter().map(|x| x * s).collect(),
                )
            }
            DomainKind::Paraboloid => {
                let vn = v.tail[0];
                if !(vn < 0.0) {
                    return Ok(None);
                }
                let h: f64 = v.head.iter().map(|c| c.norm_sqr()).sum();
                Mixed::new(
                    v.head.iter().map(|c| -c.conj() / (2.0 * vn)).collect(),
                    vec![h / (4.0 * vn * vn)],
                )
            }
            DomainKind::TubePolygon { vertices } => {
                let values: Vec<f64> = vertices
                    .iter()
                    .map(|p| p[0] * v.tail[0] + p[1] * v.tail[1])
                    .collect();
                let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let scale = v.norm()
                    * vertices
                        .iter()
                        .map(|p| p[0].hypot(p[1]))
                        .fold(1.0, f64::max);
                let winners: Vec<usize> = (0..values.len())
                    .filter(|&i| best - values[i] <= VERTEX_TIE_TOL * scale)
                    .collect();
                if winners.len() > 1 {
                    return Err(Error::NonSingletonSupport(format!("{:?}", v.tail)));
                }
                Mixed::new(vec![], vertices[winners[0]].to_vec())
            }
        };
        Ok(Some(SupportPoint {
            point,
            direction: v.clone(),
        }))
    }

    /// A point well inside the domain.
    pub fn center(&self) -> Vec<C64> {
        let zero = C64::new(0.0, 0.0);
        match &self.kind {
            DomainKind::Paraboloid => {
                let mut z = vec![zero; self.n];
                z[self.n - 1] = C64::new(1.0, 0.0);
                z
            }
            DomainKind::TubePolygon { vertices } => {
                let m = vertices.len() as f64;
                let cx = vertices.iter().map(|p| p[0]).sum::<f64>() / m;
                let cy = vertices.iter().map(|p| p[1]).sum::<f64>() / m;
                vec![C64::new(cx, 0.0), C64::new(cy, 0.0)]
            }
            _ => vec![zero; self.n],
        }
    }

    /// Per-coordinate `(lo, hi)` ranges for `(Re z_1, Im z_1, Re z_2, ...)`.
    /// Unbounded directions are cut to a window of comparable size.
    pub fn sampling_box(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.n);
        match &self.kind {
            DomainKind::Semiball { radius: r } | DomainKind::EuclideanBall { radius: r } => {
                out.resize(2 * self.n, (-r, *r));
            }
            DomainKind::Paraboloid => {
                out.resize(2 * (self.n - 1), (-2.0, 2.0));
                out.push((0.0, 4.0));
                out.push((-2.0, 2.0));
            }
            DomainKind::TubePolygon { vertices } => {
                for axis in 0..2 {
                    let lo = vertices
                        .iter()
                        .map(|p| p[axis])
                        .fold(f64::INFINITY, f64::min);
                    let hi = vertices
                        .iter()
                        .map(|p| p[axis])
                        .fold(f64::NEG_INFINITY, f64::max);
                    out.push((lo, hi));
                    out.push((-1.0, 1.0));
                }
            }
        }
        out
    }

    /// Uniform samples from the sampling box, kept when strictly inside.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<C64>> {
        let b = self.sampling_box();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let z: Vec<C64> = b
                .chunks(2)
                .map(|c| {
                    C64::new(
                        rng.random_range(c[0].0..=c[0].1),
                        rng.random_range(c[1].0..=c[1].1),
                    )
                })
                .collect();
            if self.margin(&z) > 0.0 {
                out.push(z);
            }
        }
        out
    }

    /// Points with margin in `(0, NEAR_BOUNDARY_MARGIN)`, found by bisection
    /// along random rays from [`Self::center`].
    pub fn sample_near_boundary<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<C64>> {
        let c = self.center();
        let mut out = Vec::with_capacity(count);
        let at =
            |u: &[C64], t: f64| -> Vec<C64> { c.iter().zip(u).map(|(a, b)| a + b * t).collect() };
        while out.len() < count {
            let u: Vec<C64> = (0..self.n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let mut hi = 1.0;
            while self.margin(&at(&u, hi)) > 0.0 && hi < 1e6 {
                hi *= 2.0;
            }
            if self.margin(&at(&u, hi)) > 0.0 {
                continue;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let m = self.margin(&at(&u, lo));
                if m > 0.0 && m < NEAR_BOUNDARY_MARGIN {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.margin(&at(&u, mid)) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let z = at(&u, lo);
            let m = self.margin(&z);
            if m > 0.0 && m < NEAR_BOUNDARY_MARGIN {
                out.push(z);
            }
        }
        out
    }
}
