use std::f64::consts::{FRAC_1_PI, TAU};

use serde::{Deserialize, Serialize};

use super::signal::{forward_dft, SignalRecord};
use super::CircleGrid;
use crate::{Error, Result, C64};

/// Extensions are only evaluated for `|lambda| <= 1 - DEFAULT_RIM`.
pub const DEFAULT_RIM: f64 = 1e-6;

/// A point mass `alpha * rho * delta(e^{i theta})` acting on the last `d`
/// coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomRecord")]
pub struct Atom {
    theta: f64,
    alpha: f64,
    rho: Vec<f64>,
}

#[derive(Deserialize)]
struct AtomRecord {
    theta: f64,
    alpha: f64,
    rho: Vec<f64>,
}

impl TryFrom<AtomRecord> for Atom {
    type Error = Error;
    fn try_from(r: AtomRecord) -> Result<Self> {
        Atom::new(r.theta, r.alpha, r.rho)
    }
}

impl Atom {
    /// Angle is reduced to `[0, 2 pi)`; `alpha >= 0` and `|rho| = 1` are enforced.
    pub fn new(theta: f64, alpha: f64, rho: Vec<f64>) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Argument(format!(
                "atom weight must be >= 0, got {alpha}"
            )));
        }
        let norm = rho.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rho.is_empty() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Argument(format!(
                "atom direction must be a unit vector, |rho| = {norm}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::Argument("atom angle must be finite".into()));
        }
        Ok(Atom {
            theta: theta.rem_euclid(TAU),
            alpha,
            rho,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn point(&self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Atom> {
        Atom::new(self.theta, alpha, self.rho.clone())
    }

    /// `(alpha / 2 pi) (l0 + l) / (l0 - l)`, the holomorphic extension of the
    /// point mass (scalar factor; multiply by `rho`).
    pub fn cayley(&self, lambda: C64) -> C64 {
        let l0 = self.point();
        (l0 + lambda) / (l0 - lambda) * (self.alpha * 0.5 * FRAC_1_PI)
    }

    /// `(cayley(l) - cayley(0)) / l = (alpha / 2 pi) 2 / (l0 - l)`.
    pub fn quotient(&self, lambda: C64) -> C64 {
        (self.point() - lambda).inv() * (self.alpha * FRAC_1_PI)
    }

    pub fn derivative(&self, lambda: C64) -> C64 {
        let l0 = self.point();
        l0 / ((l0 - lambda) * (l0 - lambda)) * (self.alpha * FRAC_1_PI)
    }

    /// `(alpha / 2 pi) (1 - |l|^2) / |l0 - l|^2`.
    pub fn poisson(&self, lambda: C64) -> f64 {
        (1.0 - lambda.norm_sqr()) / (self.point() - lambda).norm_sqr()
            * (self.alpha * 0.5 * FRAC_1_PI)
    }
}

/// `g dL + rho dnu` with `g` sampled on the grid and `nu` a finite sum of atoms
/// on the last `d` coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SignalRecord", try_from = "SignalRecord")]
pub struct BoundaryMeasure {
    grid: CircleGrid,
    d: usize,
    density: Vec<Vec<f64>>,
    atoms: Vec<Atom>,
}

impl BoundaryMeasure {
    pub fn new(
        grid: CircleGrid,
        d: usize,
        density: Vec<Vec<f64>>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        let n = density.len();
        if d > n {
            return Err(Error::Argument(format!("d = {d} exceeds n = {n}")));
        }
        if let Some(bad) = density.iter().position(|v| v.len() != grid.size()) {
            return Err(Error::Argument(format!(
                "density component {bad} has the wrong length"
            )));
        }
        if density.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Argument("density must be finite".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.rho.len() != d) {
            return Err(Error::Argument(format!(
                "atom direction has {} coordinates, expected d = {d}",
                a.rho.len()
            )));
        }
        Ok(BoundaryMeasure {
            grid,
            d,
            density,
            atoms,
        })
    }

    /// Density-only measure from samples of `g`.
    pub fn from_density<F: Fn(C64) -> Vec<f64>>(
        grid: CircleGrid,
        n: usize,
        d: usize,
        g: F,
    ) -> Result<Self> {
        let mut density = vec![Vec::with_capacity(grid.size()); n];
        for l in grid.nodes() {
            for (col, x) in density.iter_mut().zip(g(l)) {
                col.push(x);
            }
        }
        Self::new(grid, d, density, Vec::new())
    }

    pub fn zero(grid: CircleGrid, n: usize, d: usize) -> Self {
        BoundaryMeasure {
            grid,
            d,
            density: vec![vec![0.0; grid.size()]; n],
            atoms: Vec::new(),
        }
    }

    pub fn with_atoms(mut self, atoms: Vec<Atom>) -> Result<Self> {
        self.atoms = atoms;
        Self::new(self.grid, self.d, self.density, self.atoms)
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.density.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn density(&self) -> &[Vec<f64>] {
        &self.density
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Total mass of each component (density by trapezoid, atoms exactly).
    pub fn total_mass(&self) -> Vec<f64> {
        let w = self.grid.weight();
        let mut mass: Vec<f64> = self
            .density
            .iter()
            .map(|g| g.iter().sum::<f64>() * w)
            .collect();
        let k = self.n() - self.d;
        for a in &self.atoms {
            for (m, r) in mass[k..].iter_mut().zip(&a.rho) {
                *m += a.alpha * r;
            }
        }
        mass
    }

    /// Taylor coefficients of the Schwarz integral of the density,
    /// `s_0 = g_0`, `s_m = 2 g_m` for `1 <= m <= N/2 - 1`.
    pub fn schwarz_taylor(&self) -> Vec<Vec<C64>> {
        let max = self.grid.max_degree();
        self.density
            .iter()
            .map(|g| {
                let samples: Vec<C64> = g.iter().map(|&x| C64::new(x, 0.0)).collect();
                let c = forward_dft(&samples);
                let mut s = Vec::with_capacity(max + 1);
                s.push(C64::new(c[0].re, 0.0));
                s.extend(c[1..=max].iter().map(|x| x * 2.0));
                s
            })
            .collect()
    }
}

impl From<BoundaryMeasure> for SignalRecord {
    fn from(m: BoundaryMeasure) -> Self {
        SignalRecord {
            size: m.grid.size(),
            values: m
                .density
                .into_iter()
                .map(|g| g.into_iter().map(|x| C64::new(x, 0.0)).collect())
                .collect(),
            atoms: m.atoms,
            d: Some(m.d),
        }
    }
}

impl TryFrom<SignalRecord> for BoundaryMeasure {
    type Error = Error;
    fn try_from(r: SignalRecord) -> Result<Self> {
        let grid = CircleGrid::new(r.size)?;
        if r.values.iter().flatten().any(|c| c.im != 0.0) {
            return Err(Error::Argument("measure densities must be real".into()));
        }
        let density = r
            .values
            .into_iter()
            .map(|g| g.into_iter().map(|c| c.re).collect())
            .collect();
        let d = r.d.unwrap_or(0);
        BoundaryMeasure::new(grid, d, density, r.atoms)
    }
}

pub(crate) fn check_rim(lambda: C64) -> Result<()> {
    let modulus = lambda.norm();
    if !(modulus <= 1.0 - DEFAULT_RIM) {
        return Err(Error::EvaluationRim {
            modulus,
            rim: DEFAULT_RIM,
        });
    }
    Ok(())
}

pub(crate) fn horner(coeffs: &[C64], lambda: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, c| acc * lambda + c)
}

/// Poisson integral `(1/2pi) int (1 - |l|^2) / |z - l|^2 dmu(z)` of every component.
pub fn poisson_extend(measure: &BoundaryMeasure, lambda: C64) -> Result<Vec<f64>> {
    Ok(schwarz_extend(measure, &vec![0.0; measure.n()], lambda)?
        .into_iter()
        .map(|c| c.re)
        .collect())
}

/// Schwarz integral `(1/2pi) int (z + l) / (z - l) dmu(z) + i imconst`.
pub fn schwarz_extend(measure: &BoundaryMeasure, imconst: &[f64], lambda: C64) -> Result<Vec<C64>> {
    check_rim(lambda)?;
    if imconst.len() != measure.n() {
        return Err(Error::Argument(format!(
            "imconst has {} entries, measure has {} components",
            imconst.len(),
            measure.n()
        )));
    }
    let mut out: Vec<C64> = measure
        .schwarz_taylor()
        .iter()
        .zip(imconst)
        .map(|(s, &ic)| horner(s, lambda) + C64::new(0.0, ic))
        .collect();
    let k = measure.n() - measure.d();
    for a in measure.atoms() {
        let c = a.cayley(lambda);
        for (o, r) in out[k..].iter_mut().zip(a.rho()) {
            *o += c * r;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> CircleGrid {
        CircleGrid::new(256).unwrap()
    }

    #[test]
    fn constant_density_extends_to_the_constant() {
        let m = BoundaryMeasure::from_density(grid(), 1, 0, |_| vec![3.25]).unwrap();
        for l in [C64::new(0.0, 0.0), C64::new(0.5, -0.3), C64::new(0.0, 0.95)] {
            assert!((poisson_extend(&m, l).unwrap()[0] - 3.25).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_atom_gives_the_poisson_kernel_and_cayley_map() {
        let atom = Atom::new(0.0, TAU, vec![1.0]).unwrap();
        let m = BoundaryMeasure::zero(grid(), 1, 1)
            .with_atoms(vec![atom])
            .unwrap();
        for l in [C64::new(0.3, 0.1), C64::new(-0.7, 0.2), C64::new(0.0, 0.0)] {
            let p = poisson_extend(&m, l).unwrap()[0];
            let kernel = (1.0 - l.norm_sqr()) / (C64::new(1.0, 0.0) - l).norm_sqr();
            assert!((p - kernel).abs() < 1e-13);
            let s = schwarz_extend(&m, &[0.0], l).unwrap()[0];
            assert!((s - (1.0 + l) / (1.0 - l)).norm() < 1e-13);
        }
    }

    #[test]
    fn cosine_density_extends_to_identity() {
        let m = BoundaryMeasure::from_density(grid(), 1, 0, |l| vec![l.re]).unwrap();
        let l = C64::new(0.5, 0.0);
        assert!((poisson_extend(&m, l).unwrap()[0] - 0.5).abs() < 1e-14);
        let z = C64::new(0.2, -0.6);
        assert!((schwarz_extend(&m, &[0.0], z).unwrap()[0] - z).norm() < 1e-14);
    }

    #[test]
    fn zero_measure_returns_imaginary_constant() {
        let m = BoundaryMeasure::zero(grid(), 2, 1);
        let v = schwarz_extend(&m, &[0.0, 5.0], C64::new(0.4, 0.4)).unwrap();
        assert_eq!(v, vec![C64::new(0.0, 0.0), C64::new(0.0, 5.0)]);
    }

    #[test]
    fn rim_is_enforced() {
        let m = BoundaryMeasure::zero(grid(), 1, 0);
        let err = poisson_extend(&m, C64::new(1.0 - 1e-7, 0.0)).unwrap_err();
        assert!(matches!(err, Error::EvaluationRim { .. }));
        assert!(poisson_extend(&m, C64::new(1.0 - 1e-6, 0.0)).is_ok());
    }

    #[test]
    fn atom_validation() {
        assert!(Atom::new(0.0, -1.0, vec![1.0]).is_err());
        assert!(Atom::new(0.0, 1.0, vec![0.5]).is_err());
        let a = Atom::new(-1.0, 1.0, vec![1.0]).unwrap();
        assert!((a.theta() - (TAU - 1.0)).abs() < 1e-15);
        let l = C64::new(0.2, 0.3);
        let q = (a.cayley(l) - a.cayley(C64::new(0.0, 0.0))) / l;
        assert!((q - a.quotient(l)).norm() < 1e-14);
    }

    #[test]
    fn measure_record_round_trip() {
        let atom = Atom::new(1.0, 2.0, vec![1.0]).unwrap();
        let m =
            BoundaryMeasure::from_density(CircleGrid::new(8).unwrap(), 2, 1, |l| vec![l.re, l.im])
                .unwrap()
                .with_atoms(vec![atom])
                .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: BoundaryMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
