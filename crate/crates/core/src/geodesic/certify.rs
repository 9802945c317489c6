use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pipeline::{boundary_data_with, exempt_nodes};
use super::psi::PsiAffine;
use super::GeodesicCandidate;
use crate::circle::BoundarySignal;
use crate::hclass::HParams;
use crate::mixed::dot;
use crate::{Error, Execution, Mixed, Result, C64};

/// `phi(0)` is treated as a boundary point when `|margin| <= CENTER_TOL`.
const CENTER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyConfig {
    pub seed: u64,
    pub interior_samples: usize,
    pub boundary_samples: usize,
    pub radii: Vec<f64>,
    pub angles: usize,
    pub tol_psi: f64,
    pub tol_nd: f64,
    pub tol_holo: f64,
    pub tol_atom: f64,
    /// Bound on the node-wise distance between `phi*` and the support points.
    pub tol_support: f64,
    pub execution: Execution,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            seed: 0,
            interior_samples: 200,
            boundary_samples: 50,
            radii: vec![0.0, 0.3, 0.6, 0.9],
            angles: 64,
            tol_psi: 1e-9,
            tol_nd: 1e-9,
            tol_holo: 1e-8,
            tol_atom: 1e-10,
            tol_support: 1e-6,
            execution: Execution::Parallel,
        }
    }
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, t) in [
            ("tol_psi", self.tol_psi),
            ("tol_nd", self.tol_nd),
            ("tol_holo", self.tol_holo),
            ("tol_atom", self.tol_atom),
            ("tol_support", self.tol_support),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {t}")));
            }
        }
        if self.radii.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(Error::Config("sampling radii must lie in [0, 1)".into()));
        }
        if self.angles == 0 {
            return Err(Error::Config("angles must be positive".into()));
        }
        Ok(())
    }

    /// The `l` sample: each radius times `angles` equispaced angles, with the
    /// origin counted once.
    pub fn lambda_grid(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for &r in &self.radii {
            if r == 0.0 {
                out.push(C64::new(0.0, 0.0));
                continue;
            }
            out.extend(
                (0..self.angles).map(|k| C64::from_polar(r, TAU * k as f64 / self.angles as f64)),
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    BoundaryDegenerate,
    Rejected(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        *self == Verdict::Certified
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::Certified => "certified".into(),
            Verdict::BoundaryDegenerate => "boundary_degenerate".into(),
            Verdict::Rejected(r) => format!("rejected({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    /// Max node distance between `(phi*_head, Re phi*_tail)` and the support
    /// point of `h`'s symbol, nodes next to atoms excluded.
    pub support_residual: f64,
    /// Negative-frequency energy of each head component of the boundary
    /// data, relative to the energy of the whole boundary signal.
    pub holo_residuals: Vec<f64>,
    pub psi_max: f64,
    pub psi_at_zero: f64,
    pub atom_residual: f64,
    pub center_inside: bool,
    pub center_margin: f64,
    /// Whether the domain's projection to the head coordinates is bounded.
    pub bounded_head_projection: bool,
    pub samples: usize,
    pub verdict: Verdict,
}

/// Negative-frequency energy of each head component over the energy of the
/// whole signal plus `|phi(0)|^2`, so that a head component that is
/// numerically zero does not read as non-holomorphic. The `|phi(0)|^2` term
/// covers maps whose regular boundary data vanishes (pure Cayley terms).
fn head_hardy_residuals(signal: &BoundarySignal, head: usize, center_energy: f64) -> Vec<f64> {
    let table = signal.coefficients();
    let energy = |j: usize, negative_only: bool| -> f64 {
        table
            .frequencies()
            .filter(|&f| !negative_only || f < 0)
            .map(|f| table.get(j, f).norm_sqr())
            .sum()
    };
    let total: f64 = (0..signal.components())
        .map(|j| energy(j, false))
        .sum::<f64>()
        + center_energy;
    (0..head)
        .map(|j| {
            if total > 0.0 {
                energy(j, true) / total
            } else {
                0.0
            }
        })
        .collect()
}

/// Numerical check of the sufficient condition for `phi` to be a geodesic:
/// `Re psi_z(l) <= 0` on seeded samples, `Re psi_{phi(0)}(0) < 0`, support
/// data matching `phi*`, holomorphic head data and compatible atoms.
pub fn certify(
    candidate: &GeodesicCandidate,
    h: &HParams,
    config: &CertifyConfig,
) -> Result<CertificationReport> {
    config.validate()?;
    let domain = &candidate.domain;
    let rep = &candidate.rep;
    if (h.n, h.d) != (rep.n(), rep.d()) || (domain.n(), domain.d()) != (rep.n(), rep.d()) {
        return Err(Error::Argument(
            "candidate, h and domain disagree on (n, d)".into(),
        ));
    }
    let poly = h.polynomial()?;
    let n = rep.n();
    let d = rep.d();
    let k = n - d;
    let zero = C64::new(0.0, 0.0);
    let phi0 = rep.eval(zero);
    let center_margin = domain.margin(&phi0);

    let holo_residuals = head_hardy_residuals(
        &candidate.boundary,
        k,
        phi0.iter().map(|c| c.norm_sqr()).sum(),
    );
    let atom_residual = super::atom_compatibility(h, rep.atoms())?;

    let grid = candidate.grid();
    let exempt = exempt_nodes(grid, rep.atoms());
    let support_residual = match boundary_data_with(domain, &poly, grid, &exempt) {
        Ok(support) => (0..grid.size())
            .filter(|i| exempt.binary_search(i).is_err())
            .map(|i| {
                let phi = Mixed::from_complex(&rep.eval_regular(grid.node(i)), d);
                let col: Vec<C64> = support.values().iter().map(|c| c[i]).collect();
                phi.distance(&Mixed::from_complex(&col, d))
            })
            .fold(0.0, f64::max),
        Err(Error::EmptySupport { .. }) | Err(Error::NonSingletonSupport(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };

    let h0 = poly.at_zero();
    let psi_at_zero = -dot(&h0, &rep.derivative(zero)).re;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut zs = domain.sample_interior(&mut rng, config.interior_samples);
    zs.extend(domain.sample_near_boundary(&mut rng, config.boundary_samples));
    let lambdas = config.lambda_grid();
    let frames = config
        .execution
        .map_slice(&lambdas, |&l| PsiAffine::new(rep, &poly, &phi0, l));
    let psi_max = config
        .execution
        .map_slice(&zs, |z| {
            let w: Vec<C64> = z.iter().zip(&phi0).map(|(a, b)| a - b).collect();
            let s0 = dot(&h0, &w);
            frames
                .iter()
                .map(|f| f.at(z, s0).re)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    let verdict = if center_margin < -CENTER_TOL {
        Verdict::Rejected("outside".into())
    } else if center_margin.abs() <= CENTER_TOL {
        Verdict::BoundaryDegenerate
    } else if holo_residuals.iter().any(|&r| !(r <= config.tol_holo)) {
        Verdict::Rejected("holomorphy".into())
    } else if !(atom_residual <= config.tol_atom) {
        Verdict::Rejected("atom".into())
    } else if !(psi_max <= config.tol_psi) {
        Verdict::Rejected("psi_positive".into())
    } else if !(psi_at_zero <= -config.tol_nd) {
        Verdict::Rejected("nondegeneracy".into())
    } else if !(support_residual <= config.tol_support) {
        Verdict::Rejected("support".into())
    } else {
        Verdict::Certified
    };

    Ok(CertificationReport {
        support_residual,
        holo_residuals,
        psi_max,
        psi_at_zero,
        atom_residual,
        center_inside: center_margin > CENTER_TOL,
        center_margin,
        bounded_head_projection: domain.bounded_head_projection(),
        samples: zs.len() * lambdas.len(),
        verdict,
    })
}
