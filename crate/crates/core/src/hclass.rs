//! Finite parametrizations of dual maps `h`.
//!
//! The first `n - d` components are free complex polynomials. Each of the
//! last `d` components has a real boundary symbol `conj(l) h_j(l)` on the
//! unit circle and comes in one of two closed forms:
//!
//! - pair form `conj(a) l^2 + b l + a` with `b` real;
//! - signed positive form `s c (l - d)(1 - conj(d) l)`, whose symbol is
//!   `s c |l - d|^2`.

use serde::{Deserialize, Deserializer, Serialize};

use crate::circle::CircleGrid;
use crate::{Error, Mixed, Result, C64};

/// Default degree of the free polynomial components.
pub const DEFAULT_FREE_DEGREE: usize = 4;

const STRUCTURE_TOL: f64 = 1e-12;
const SYMBOL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constrained {
    Pair {
        a: C64,
        /// Stored as complex so that a non-real value can be reported
        /// instead of rejected at parse time.
        #[serde(deserialize_with = "real_or_complex")]
        b: C64,
    },
    Positive {
        sign: i8,
        c: f64,
        d_blaschke: C64,
    },
}

fn real_or_complex<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<C64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Complex(C64),
    }
    Ok(match Repr::deserialize(de)? {
        Repr::Real(x) => C64::new(x, 0.0),
        Repr::Complex(c) => c,
    })
}

impl Constrained {
    pub fn pair(a: C64, b: f64) -> Self {
        Constrained::Pair {
            a,
            b: C64::new(b, 0.0),
        }
    }

    pub fn positive(sign: i8, c: f64, d_blaschke: C64) -> Self {
        Constrained::Positive {
            sign,
            c,
            d_blaschke,
        }
    }

    /// Coefficients `[h(0), h'(0), h''(0)/2]`.
    pub fn coefficients(&self) -> [C64; 3] {
        match *self {
            Constrained::Pair { a, b } => [a, b, a.conj()],
            Constrained::Positive {
                sign,
                c,
                d_blaschke: d,
            } => {
                let k = f64::from(sign) * c;
                [-d * k, C64::new(1.0 + d.norm_sqr(), 0.0) * k, -d.conj() * k]
            }
        }
    }

    fn problems(&self, component: usize, out: &mut Vec<String>) {
        match *self {
            Constrained::Pair { b, .. } => {
                if b.im.abs() > STRUCTURE_TOL {
                    out.push(format!("component {component}: b = {b} is not real"));
                }
            }
            Constrained::Positive {
                sign,
                c,
                d_blaschke,
            } => {
                if sign != 1 && sign != -1 {
                    out.push(format!("component {component}: sign {sign} is not +-1"));
                }
                if !(c >= 0.0) {
                    out.push(format!("component {component}: c = {c} is negative"));
                }
                if !(d_blaschke.norm() <= 1.0 + STRUCTURE_TOL) {
                    out.push(format!(
                        "component {component}: |d_blaschke| = {} exceeds 1",
                        d_blaschke.norm()
                    ));
                }
            }
        }
    }

    fn scaled(&self, t: f64) -> Constrained {
        match *self {
            Constrained::Pair { a, b } => Constrained::Pair { a: a * t, b: b * t },
            Constrained::Positive {
                sign,
                c,
                d_blaschke,
            } => Constrained::Positive {
                sign,
                c: c * t,
                d_blaschke,
            },
        }
    }
}

/// A candidate dual map `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HParams {
    pub n: usize,
    pub d: usize,
    /// Coefficients `c_0, c_1, ...` of each of the first `n - d` components.
    pub free: Vec<Vec<C64>>,
    pub constrained: Vec<Constrained>,
}

/// Outcome of [`HParams::validate_class`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub passed: bool,
    /// Largest `|Im(conj(l) h_j(l))|` over nodes and constrained components.
    pub max_imag_residual: f64,
    /// Node/component pairs where a signed positive form has the wrong sign.
    pub sign_violations: usize,
    pub failures: Vec<String>,
}

impl HParams {
    pub fn new(free: Vec<Vec<C64>>, constrained: Vec<Constrained>) -> Result<Self> {
        let h = HParams {
            n: free.len() + constrained.len(),
            d: constrained.len(),
            free,
            constrained,
        };
        h.validate()?;
        Ok(h)
    }

    /// The invariants that do not need a grid: shapes, real `b`, `c >= 0`,
    /// `|d_blaschke| <= 1`.
    pub fn validate(&self) -> Result<()> {
        let problems = self.structural_problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    fn structural_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.d > self.n {
            out.push(format!("d = {} exceeds n = {}", self.d, self.n));
            return out;
        }
        if self.free.len() != self.n - self.d {
            out.push(format!(
                "expected {} free components, got {}",
                self.n - self.d,
                self.free.len()
            ));
        }
        if self.constrained.len() != self.d {
            out.push(format!(
                "expected {} constrained components, got {}",
                self.d,
                self.constrained.len()
            ));
        }
        for (j, c) in self.free.iter().enumerate() {
            if c.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                out.push(format!("component {j}: non-finite coefficient"));
            }
        }
        let k = self.free.len();
        for (j, c) in self.constrained.iter().enumerate() {
            c.problems(k + j, &mut out);
        }
        out
    }

    /// Expanded polynomial coefficients of every component, without validation.
    pub fn coefficients(&self) -> Vec<Vec<C64>> {
        self.free
            .iter()
            .cloned()
            .chain(self.constrained.iter().map(|c| c.coefficients().to_vec()))
            .collect()
    }

    pub fn polynomial(&self) -> Result<HPoly> {
        self.validate()?;
        Ok(HPoly::new(self.coefficients()))
    }

    pub fn eval(&self, lambda: C64) -> Result<Vec<C64>> {
        Ok(self.polynomial()?.eval(lambda))
    }

    /// `conj(l) h(l)` at a point of the unit circle, with the last `d`
    /// components returned as reals.
    pub fn boundary_symbol(&self, lambda: C64) -> Result<Mixed> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Argument(format!(
                "|lambda| = {} is not on the unit circle",
                lambda.norm()
            )));
        }
        symbol_of(&self.polynomial()?, self.d, lambda)
    }

    pub fn validate_class(&self, grid: CircleGrid) -> ClassReport {
        let mut failures = self.structural_problems();
        let shape_ok = self.d <= self.n && self.free.len() + self.constrained.len() == self.n;
        let mut max_imag_residual: f64 = 0.0;
        let mut sign_violations = 0;
        if shape_ok {
            let k = self.free.len();
            for l in grid.nodes() {
                for (j, c) in self.constrained.iter().enumerate() {
                    let coeffs = c.coefficients();
                    let s = l.conj() * (coeffs[0] + l * (coeffs[1] + l * coeffs[2]));
                    max_imag_residual = max_imag_residual.max(s.im.abs());
                    if let Constrained::Positive { sign, .. } = *c {
                        if f64::from(sign) * s.re < -STRUCTURE_TOL {
                            sign_violations += 1;
                            if sign_violations == 1 {
                                failures.push(format!(
                                    "component {}: symbol {} has the wrong sign",
                                    k + j,
                                    s.re
                                ));
                            }
                        }
                    }
                }
            }
            if max_imag_residual > STRUCTURE_TOL {
                failures.push(format!(
                    "imaginary boundary symbol residual {max_imag_residual:e}"
                ));
            }
        }
        ClassReport {
            passed: failures.is_empty(),
            max_imag_residual,
            sign_violations,
            failures,
        }
    }

    pub fn scaled(&self, t: f64) -> HParams {
        HParams {
            n: self.n,
            d: self.d,
            free: self
                .free
                .iter()
                .map(|c| c.iter().map(|x| x * t).collect())
                .collect(),
            constrained: self.constrained.iter().map(|c| c.scaled(t)).collect(),
        }
    }

    /// Euclidean norm of the expanded coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coefficients()
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> HParams {
        let r = self.norm();
        if r > 0.0 {
            self.scaled(1.0 / r)
        } else {
            self.clone()
        }
    }

    /// The dual map of `phi o m` for `m(l) = e^{i theta} (l - w) / (1 - conj(w) l)`:
    /// `h(m(l)) (1 - conj(w) l)^2 e^{-i theta} / (1 - |w|^2)`.
    ///
    /// Keeps the class as long as every component has degree at most 2.
    pub fn mobius(&self, theta: f64, w: C64) -> Result<HParams> {
        self.validate()?;
        if !(w.norm() < 1.0) {
            return Err(Error::Argument(format!(
                "automorphism centre |w| = {} is not inside the disc",
                w.norm()
            )));
        }
        let rot = C64::from_polar(1.0, theta);
        let scale = rot.conj() / (1.0 - w.norm_sqr());
        let transform = |c: &[C64]| -> Result<[C64; 3]> {
            let degree = c.iter().rposition(|x| x.norm() > 0.0).unwrap_or(0);
            if degree > 2 {
                return Err(Error::Argument(format!(
                    "reparametrizing h needs degree <= 2, got {degree}"
                )));
            }
            // sum_k c_k e^{ik theta} (l - w)^k (1 - conj(w) l)^{2-k}
            let lin_a = [-w, C64::new(1.0, 0.0)];
            let lin_b = [C64::new(1.0, 0.0), -w.conj()];
            let mut out = [C64::new(0.0, 0.0); 3];
            for (k, &ck) in c.iter().enumerate().take(3) {
                let mut poly = vec![ck * rot.powu(k as u32) * scale];
                for i in 0..2 {
                    let factor = if i < k { &lin_a } else { &lin_b };
                    poly = poly_mul(&poly, factor);
                }
                for (o, p) in out.iter_mut().zip(&poly) {
                    *o += p;
                }
            }
            Ok(out)
        };
        let free = self
            .free
            .iter()
            .map(|c| {
                let mut t = transform(c)?.to_vec();
                t.truncate(t.iter().rposition(|x| x.norm() > 0.0).map_or(1, |p| p + 1));
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        let constrained = self
            .constrained
            .iter()
            .map(|c| {
                let t = transform(&c.coefficients())?;
                Ok(Constrained::pair(t[0], t[1].re))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HParams {
            n: self.n,
            d: self.d,
            free,
            constrained,
        })
    }
}

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn symbol_of(poly: &HPoly, d: usize, lambda: C64) -> Result<Mixed> {
    let v: Vec<C64> = poly
        .eval(lambda)
        .into_iter()
        .map(|x| x * lambda.conj())
        .collect();
    let k = v.len() - d;
    for (j, s) in v.iter().enumerate().skip(k) {
        if s.im.abs() > SYMBOL_TOL {
            return Err(Error::ClassViolation {
                component: j,
                residual: s.im.abs(),
            });
        }
    }
    Ok(Mixed::from_complex(&v, d))
}

/// Evaluated form of `h`: one polynomial per component.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly {
    coeffs: Vec<Vec<C64>>,
}

impl HPoly {
    pub fn new(coeffs: Vec<Vec<C64>>) -> Self {
        HPoly { coeffs }
    }

    pub fn coefficients(&self) -> &[Vec<C64>] {
        &self.coeffs
    }

    pub fn eval(&self, lambda: C64) -> Vec<C64> {
        self.coeffs.iter().map(|c| horner(c, lambda)).collect()
    }

    pub fn at_zero(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .map(|c| c.first().copied().unwrap_or_default())
            .collect()
    }

    pub fn derivative_at_zero(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .map(|c| c.get(1).copied().unwrap_or_default())
            .collect()
    }

    /// `(h(l) - h(0)) / l`.
    pub fn quotient(&self, lambda: C64) -> Vec<C64> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.len() > 1 {
                    horner(&c[1..], lambda)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.norm() == 0.0)
    }
}

fn horner(coeffs: &[C64], lambda: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, c| acc * lambda + c)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn grid() -> CircleGrid {
        CircleGrid::new(256).unwrap()
    }

    #[test]
    fn centre_of_the_pair_family_is_the_identity() {
        let h = HParams::new(vec![], vec![Constrained::pair(c(0.0, 0.0), 1.0)]).unwrap();
        let l = c(0.3, -0.2);
        assert_eq!(h.eval(l).unwrap(), vec![l]);
        for node in grid().nodes() {
            let s = h.boundary_symbol(node).unwrap();
            assert!((s.tail[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn positive_form_with_centred_zero_is_the_identity() {
        let h = HParams::new(vec![], vec![Constrained::positive(1, 1.0, c(0.0, 0.0))]).unwrap();
        let l = c(-0.5, 0.1);
        assert_eq!(h.eval(l).unwrap(), vec![l]);
        let s = h.boundary_symbol(C64::from_polar(1.0, 1.1)).unwrap();
        assert!((s.tail[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pair_with_imaginary_a_gives_twice_the_imaginary_part() {
        let h = HParams::new(vec![], vec![Constrained::pair(c(0.0, 1.0), 0.0)]).unwrap();
        for l in grid().nodes() {
            let s = h.boundary_symbol(l).unwrap();
            assert!((s.tail[0] - 2.0 * l.im).abs() < 1e-14);
        }
    }

    #[test]
    fn symbols_of_small_examples() {
        let l = C64::from_polar(1.0, 0.7);
        let h = HParams::new(
            vec![vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]],
            vec![Constrained::pair(c(0.0, 0.0), 0.0)],
        )
        .unwrap();
        let s = h.boundary_symbol(l).unwrap();
        assert!((s.head[0] - l).norm() < 1e-15);
        assert_eq!(s.tail[0], 0.0);

        let h = HParams::new(
            vec![vec![c(1.0, 0.0)]],
            vec![Constrained::pair(c(0.0, 0.0), 1.0)],
        )
        .unwrap();
        let s = h.boundary_symbol(l).unwrap();
        assert!((s.head[0] - l.conj()).norm() < 1e-15);
        assert!((s.tail[0] - 1.0).abs() < 1e-15);

        let h = HParams::new(
            vec![vec![c(0.0, 0.0)]],
            vec![Constrained::positive(1, 1.0, c(1.0, 0.0))],
        )
        .unwrap();
        let s = h.boundary_symbol(c(1.0, 0.0)).unwrap();
        assert_eq!(s.tail[0], 0.0);
    }

    #[test]
    fn pair_symbol_matches_trigonometric_closed_form() {
        let a = c(0.4, -0.9);
        let b = 0.3;
        let h = HParams::new(vec![], vec![Constrained::pair(a, b)]).unwrap();
        for l in grid().nodes() {
            let s = h.boundary_symbol(l).unwrap();
            assert!((s.tail[0] - (b + 2.0 * (a.conj() * l).re)).abs() < 1e-14);
        }
    }

    #[test]
    fn positive_symbol_is_signed_squared_distance() {
        let d = c(0.3, 0.5);
        let h = HParams::new(vec![], vec![Constrained::positive(-1, 2.5, d)]).unwrap();
        for l in grid().nodes() {
            let s = h.boundary_symbol(l).unwrap();
            assert!((s.tail[0] + 2.5 * (l - d).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_reports() {
        let ok = HParams::new(vec![], vec![Constrained::pair(c(0.0, 0.0), 0.5)]).unwrap();
        assert!(ok.validate_class(grid()).passed);

        let bad_b = HParams {
            n: 1,
            d: 1,
            free: vec![],
            constrained: vec![Constrained::Pair {
                a: c(0.0, 0.0),
                b: c(0.0, 1.0),
            }],
        };
        let r = bad_b.validate_class(grid());
        assert!(!r.passed);
        assert!((r.max_imag_residual - 1.0).abs() < 1e-15);
        assert!(matches!(bad_b.eval(c(0.0, 0.0)), Err(Error::Validation(_))));

        let bad_c = HParams {
            n: 1,
            d: 1,
            free: vec![],
            constrained: vec![Constrained::positive(1, -1.0, c(0.0, 0.0))],
        };
        let r = bad_c.validate_class(grid());
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.contains("negative")));
    }

    #[test]
    fn boundary_symbol_rejects_interior_points() {
        let h = HParams::new(vec![], vec![Constrained::pair(c(0.0, 0.0), 1.0)]).unwrap();
        assert!(matches!(
            h.boundary_symbol(c(0.5, 0.0)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn json_accepts_real_or_complex_b() {
        let json = r#"{"n":2,"d":1,"free":[[[1.0,0.0]]],"constrained":[{"kind":"pair","a":[0.0,0.0],"b":1.0}]}"#;
        let h: HParams = serde_json::from_str(json).unwrap();
        assert_eq!(h.constrained[0], Constrained::pair(c(0.0, 0.0), 1.0));
        let json = r#"{"n":1,"d":1,"free":[],"constrained":[{"kind":"positive","sign":-1,"c":1.0,"d_blaschke":[1.0,0.0]}]}"#;
        let h: HParams = serde_json::from_str(json).unwrap();
        assert!(h.validate().is_ok());
        let back: HParams = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn mobius_transform_scales_the_symbol_positively() {
        let h = HParams::new(
            vec![vec![c(0.2, 0.1), c(0.5, 0.0), c(0.0, -0.3)]],
            vec![Constrained::positive(-1, 1.0, c(0.3, 0.2))],
        )
        .unwrap();
        let (theta, w) = (0.8, c(0.3, -0.4));
        let ht = h.mobius(theta, w).unwrap();
        for k in 0..32 {
            let l = C64::from_polar(1.0, TAU * k as f64 / 32.0);
            let m = C64::from_polar(1.0, theta) * (l - w) / (1.0 - w.conj() * l);
            let orig = h.boundary_symbol(m).unwrap().to_complex();
            let new = ht.boundary_symbol(l).unwrap().to_complex();
            let ratio = (l - w).norm_sqr() / (1.0 - w.norm_sqr());
            for (a, b) in orig.iter().zip(&new) {
                assert!((a * ratio - b).norm() < 1e-12);
            }
        }
    }
}
