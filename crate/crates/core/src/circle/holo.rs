use serde::{Deserialize, Serialize};

use super::measure::horner;
use super::{Atom, BoundaryMeasure};
use crate::{Error, Result, C64};

/// A holomorphic map `D -> C^n` given by truncated Taylor series, a finite
/// sum of Cayley-type atom terms on the last `d` components, and imaginary
/// constants on those components.
///
/// The head components keep their imaginary constant inside `taylor[j][0]`;
/// `imconst` only covers the last `d` components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HoloRecord")]
pub struct HoloRep {
    d: usize,
    taylor: Vec<Vec<C64>>,
    atoms: Vec<Atom>,
    imconst: Vec<f64>,
}

#[derive(Deserialize)]
struct HoloRecord {
    d: usize,
    taylor: Vec<Vec<C64>>,
    #[serde(default)]
    atoms: Vec<Atom>,
    imconst: Vec<f64>,
}

impl TryFrom<HoloRecord> for HoloRep {
    type Error = Error;
    fn try_from(r: HoloRecord) -> Result<Self> {
        HoloRep::new(r.d, r.taylor, r.atoms, r.imconst)
    }
}

impl HoloRep {
    pub fn new(
        d: usize,
        taylor: Vec<Vec<C64>>,
        atoms: Vec<Atom>,
        imconst: Vec<f64>,
    ) -> Result<Self> {
        let n = taylor.len();
        if d > n {
            return Err(Error::Argument(format!("d = {d} exceeds n = {n}")));
        }
        if imconst.len() != d {
            return Err(Error::Argument(format!(
                "imconst has {} entries, expected d = {d}",
                imconst.len()
            )));
        }
        if atoms.iter().any(|a| a.rho().len() != d) {
            return Err(Error::Argument(
                "atom directions must have d coordinates".into(),
            ));
        }
        Ok(HoloRep {
            d,
            taylor,
            atoms,
            imconst,
        })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        HoloRep {
            d,
            taylor: vec![vec![C64::new(0.0, 0.0)]; n],
            atoms: Vec::new(),
            imconst: vec![0.0; d],
        }
    }

    /// Schwarz integral of `measure`; `imconst` has one entry per component.
    pub fn from_measure(measure: &BoundaryMeasure, imconst: &[f64]) -> Result<Self> {
        let n = measure.n();
        let d = measure.d();
        if imconst.len() != n {
            return Err(Error::Argument(format!(
                "imconst has {} entries, expected n = {n}",
                imconst.len()
            )));
        }
        let mut taylor = measure.schwarz_taylor();
        for (t, &ic) in taylor[..n - d].iter_mut().zip(imconst) {
            t[0].im += ic;
        }
        HoloRep::new(
            d,
            taylor,
            measure.atoms().to_vec(),
            imconst[n - d..].to_vec(),
        )
    }

    pub fn n(&self) -> usize {
        self.taylor.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn taylor(&self) -> &[Vec<C64>] {
        &self.taylor
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn imconst(&self) -> &[f64] {
        &self.imconst
    }

    fn head_len(&self) -> usize {
        self.n() - self.d
    }

    /// Taylor part plus imaginary constants, without atoms. Well defined on
    /// the closed disc.
    pub fn eval_regular(&self, lambda: C64) -> Vec<C64> {
        let k = self.head_len();
        self.taylor
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let v = horner(c, lambda);
                if j >= k {
                    v + C64::new(0.0, self.imconst[j - k])
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn eval(&self, lambda: C64) -> Vec<C64> {
        let mut out = self.eval_regular(lambda);
        self.add_atoms(&mut out, |a| a.cayley(lambda));
        out
    }

    pub fn derivative(&self, lambda: C64) -> Vec<C64> {
        let mut out: Vec<C64> = self
            .taylor
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(C64::new(0.0, 0.0), |acc, (m, x)| {
                        acc * lambda + x * m as f64
                    })
            })
            .collect();
        self.add_atoms(&mut out, |a| a.derivative(lambda));
        out
    }

    /// `(phi(l) - phi(0)) / l` from the series, with no cancellation near 0.
    pub fn quotient(&self, lambda: C64) -> Vec<C64> {
        let mut out: Vec<C64> = self
            .taylor
            .iter()
            .map(|c| {
                if c.len() > 1 {
                    horner(&c[1..], lambda)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        self.add_atoms(&mut out, |a| a.quotient(lambda));
        out
    }

    fn add_atoms(&self, out: &mut [C64], term: impl Fn(&Atom) -> C64) {
        let k = self.head_len();
        for a in &self.atoms {
            let t = term(a);
            for (o, r) in out[k..].iter_mut().zip(a.rho()) {
                *o += t * r;
            }
        }
    }

    pub fn with_atoms(&self, atoms: Vec<Atom>) -> Result<Self> {
        HoloRep::new(self.d, self.taylor.clone(), atoms, self.imconst.clone())
    }

    pub fn with_imconst(&self, imconst: Vec<f64>) -> Result<Self> {
        HoloRep::new(self.d, self.taylor.clone(), self.atoms.clone(), imconst)
    }

    /// Componentwise sum of two representations.
    pub fn combine(a: &HoloRep, b: &HoloRep) -> Result<HoloRep> {
        if a.n() != b.n() || a.d != b.d {
            return Err(Error::Argument(
                "cannot combine representations of different shapes".into(),
            ));
        }
        let taylor = a
            .taylor
            .iter()
            .zip(&b.taylor)
            .map(|(x, y)| {
                let len = x.len().max(y.len());
                (0..len)
                    .map(|m| {
                        x.get(m).copied().unwrap_or_default()
                            + y.get(m).copied().unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let atoms = a.atoms.iter().chain(&b.atoms).cloned().collect();
        let imconst = a
            .imconst
            .iter()
            .zip(&b.imconst)
            .map(|(x, y)| x + y)
            .collect();
        HoloRep::new(a.d, taylor, atoms, imconst)
    }
}

/// Splits `phi` into its absolutely continuous part (Taylor series and
/// imaginary constants) and its singular part (atoms only, `Im phi^s(0) = 0`).
pub fn split_parts(rep: &HoloRep) -> (HoloRep, HoloRep) {
    let n = rep.n();
    let absolutely_continuous = HoloRep {
        d: rep.d,
        taylor: rep.taylor.clone(),
        atoms: Vec::new(),
        imconst: rep.imconst.clone(),
    };
    let singular = HoloRep {
        atoms: rep.atoms.clone(),
        ..HoloRep::zero(n, rep.d)
    };
    (absolutely_continuous, singular)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_disc_point(rng: &mut ChaCha8Rng) -> C64 {
        C64::from_polar(0.95 * rng.random::<f64>().sqrt(), rng.random::<f64>() * TAU)
    }

    #[test]
    fn no_atoms_splits_into_itself_and_zero() {
        let rep = HoloRep::new(
            1,
            vec![vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(1.0, 0.0)]],
            vec![],
            vec![2.0],
        )
        .unwrap();
        let (a, s) = split_parts(&rep);
        assert_eq!(a, rep);
        assert_eq!(s.eval(c(0.3, 0.2)), vec![c(0.0, 0.0); 2]);
    }

    #[test]
    fn pure_atom_is_purely_singular() {
        let atom = Atom::new(0.0, TAU, vec![1.0]).unwrap();
        let rep = HoloRep::zero(2, 1).with_atoms(vec![atom]).unwrap();
        let (a, s) = split_parts(&rep);
        assert_eq!(a.eval(c(0.1, 0.7)), vec![c(0.0, 0.0); 2]);
        assert_eq!(s, rep);
        assert_eq!(s.eval(c(0.0, 0.0))[1].im, 0.0);
    }

    #[test]
    fn mixed_parts_resum_to_the_original() {
        let atom = Atom::new(0.0, 1.3, vec![1.0]).unwrap();
        let rep = HoloRep::new(
            1,
            vec![
                vec![c(0.0, 0.0), c(0.5, 0.0)],
                vec![c(0.0, 0.0), c(0.5, 0.0)],
            ],
            vec![atom],
            vec![0.7],
        )
        .unwrap();
        let (a, s) = split_parts(&rep);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let l = random_disc_point(&mut rng);
            let whole = rep.eval(l);
            let parts: Vec<C64> = a
                .eval(l)
                .iter()
                .zip(s.eval(l))
                .map(|(x, y)| x + y)
                .collect();
            for (w, p) in whole.iter().zip(&parts) {
                assert!((w - p).norm() <= 1e-12 * w.norm().max(1.0));
            }
        }
        assert_eq!(HoloRep::combine(&a, &s).unwrap(), rep);
    }

    #[test]
    fn quotient_and_derivative_match_finite_differences() {
        let atom = Atom::new(1.0, 2.0, vec![1.0]).unwrap();
        let rep = HoloRep::new(
            1,
            vec![
                vec![c(1.0, 1.0), c(0.5, -0.2), c(0.0, 0.3)],
                vec![c(0.2, 0.0), c(-1.0, 0.5)],
            ],
            vec![atom],
            vec![0.1],
        )
        .unwrap();
        let l = c(0.3, -0.4);
        let h = 1e-6;
        let f0 = rep.eval(c(0.0, 0.0));
        let q = rep.quotient(l);
        let d = rep.derivative(l);
        let fp = rep.eval(l + h);
        let fm = rep.eval(l - h);
        let fl = rep.eval(l);
        for j in 0..2 {
            assert!(((fl[j] - f0[j]) / l - q[j]).norm() < 1e-12);
            assert!(((fp[j] - fm[j]) / (2.0 * h) - d[j]).norm() < 1e-7);
        }
    }

    #[test]
    fn from_measure_places_imaginary_constants() {
        let m = BoundaryMeasure::zero(super::super::CircleGrid::new(16).unwrap(), 2, 1);
        let rep = HoloRep::from_measure(&m, &[1.0, 2.0]).unwrap();
        assert_eq!(rep.eval(c(0.0, 0.0)), vec![c(0.0, 1.0), c(0.0, 2.0)]);
        assert_eq!(rep.imconst(), &[2.0]);
    }
}
