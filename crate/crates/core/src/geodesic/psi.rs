use super::GeodesicCandidate;
use crate::circle::HoloRep;
use crate::hclass::{HParams, HPoly};
use crate::mixed::dot;
use crate::{Error, Result, C64};

/// Below this modulus `psi` is evaluated from Taylor quotients instead of
/// the difference quotient, which cancels badly near `l = 0`.
pub const PSI_CROSSOVER: f64 = 1e-3;

/// `psi_z(l) = A . z + B + l conj(h(0) . (z - phi(0)))` for one fixed `l`.
#[derive(Clone, Debug)]
pub(crate) struct PsiAffine {
    pub lambda: C64,
    pub a: Vec<C64>,
    pub b: C64,
}

impl PsiAffine {
    pub fn new(rep: &HoloRep, h: &HPoly, phi0: &[C64], lambda: C64) -> Self {
        if lambda.norm() >= PSI_CROSSOVER {
            Self::quotient(rep, h, phi0, lambda)
        } else {
            Self::series(rep, h, phi0, lambda)
        }
    }

    fn quotient(rep: &HoloRep, h: &HPoly, phi0: &[C64], lambda: C64) -> Self {
        let h0 = h.at_zero();
        let hl = h.eval(lambda);
        let phil = rep.eval(lambda);
        let a = hl.iter().zip(&h0).map(|(x, y)| (x - y) / lambda).collect();
        let b = (dot(&h0, phi0) - dot(&hl, &phil)) / lambda;
        PsiAffine { lambda, a, b }
    }

    fn series(rep: &HoloRep, h: &HPoly, phi0: &[C64], lambda: C64) -> Self {
        let qh = h.quotient(lambda);
        let qphi = rep.quotient(lambda);
        let b = -dot(&qphi, &h.eval(lambda)) - dot(&qh, phi0);
        PsiAffine { lambda, a: qh, b }
    }

    /// `s0 = h(0) . (z - phi(0))`.
    pub fn at(&self, z: &[C64], s0: C64) -> C64 {
        dot(&self.a, z) + self.b + self.lambda * s0.conj()
    }
}

fn eval_with(
    rep: &HoloRep,
    h: &HPoly,
    z: &[C64],
    lambda: C64,
    form: fn(&HoloRep, &HPoly, &[C64], C64) -> PsiAffine,
) -> C64 {
    let phi0 = rep.eval(C64::new(0.0, 0.0));
    let w: Vec<C64> = z.iter().zip(&phi0).map(|(a, b)| a - b).collect();
    let s0 = dot(&h.at_zero(), &w);
    form(rep, h, &phi0, lambda).at(z, s0)
}

/// The difference-quotient form; loses accuracy as `l -> 0`.
pub fn psi_quotient_form(rep: &HoloRep, h: &HPoly, z: &[C64], lambda: C64) -> C64 {
    eval_with(rep, h, z, lambda, PsiAffine::quotient)
}

/// The Taylor-quotient form; exact at `l = 0`.
pub fn psi_series_form(rep: &HoloRep, h: &HPoly, z: &[C64], lambda: C64) -> C64 {
    eval_with(rep, h, z, lambda, PsiAffine::series)
}

/// `psi_z(l)` for the candidate's `phi` and the given `h`.
pub fn eval_psi(candidate: &GeodesicCandidate, h: &HParams, z: &[C64], lambda: C64) -> Result<C64> {
    if !(lambda.norm() < 1.0) {
        return Err(Error::Argument(format!(
            "psi needs |lambda| < 1, got {}",
            lambda.norm()
        )));
    }
    if z.len() != candidate.rep.n() || h.n != candidate.rep.n() {
        return Err(Error::Argument(
            "z, h and phi must have the same dimension".into(),
        ));
    }
    let poly = h.polynomial()?;
    Ok(eval_with(&candidate.rep, &poly, z, lambda, PsiAffine::new))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, TAU};

    use super::*;
    use crate::circle::{Atom, CircleGrid};
    use crate::domains::DomainDescriptor;
    use crate::geodesic::reconstruct;
    use crate::hclass::Constrained;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn semiball() -> GeodesicCandidate {
        let dom = DomainDescriptor::builtin("semiball").unwrap();
        let h = HParams::new(
            vec![vec![c(1.0, 0.0)]],
            vec![Constrained::pair(c(0.0, 0.0), 1.0)],
        )
        .unwrap();
        reconstruct(&dom, &h, CircleGrid::new(256).unwrap(), &[], &[0.0]).unwrap()
    }

    fn cayley() -> GeodesicCandidate {
        let dom = DomainDescriptor::builtin("paraboloid").unwrap();
        let h = HParams::new(
            vec![vec![c(0.0, 0.0)]],
            vec![Constrained::positive(-1, 1.0, c(1.0, 0.0))],
        )
        .unwrap();
        let atom = Atom::new(0.0, TAU, vec![1.0]).unwrap();
        reconstruct(&dom, &h, CircleGrid::new(256).unwrap(), &[atom], &[0.0]).unwrap()
    }

    #[test]
    fn zero_h_gives_zero_psi() {
        let cand = semiball();
        let h = HParams::new(
            vec![vec![c(0.0, 0.0)]],
            vec![Constrained::pair(c(0.0, 0.0), 0.0)],
        )
        .unwrap();
        for l in [c(0.0, 0.0), c(1e-4, 0.0), c(0.5, -0.3)] {
            assert_eq!(
                eval_psi(&cand, &h, &[c(0.3, 0.1), c(-0.2, 4.0)], l).unwrap(),
                c(0.0, 0.0)
            );
        }
    }

    #[test]
    fn values_at_the_origin() {
        let cand = semiball();
        let z = cand.center();
        let v = eval_psi(&cand, &cand.h, &z, c(0.0, 0.0)).unwrap();
        assert!((v.re + FRAC_1_SQRT_2).abs() < 1e-12);

        let cand = cayley();
        let z = cand.center();
        assert!((z[1] - 1.0).norm() < 1e-12);
        let v = eval_psi(&cand, &cand.h, &z, c(0.0, 0.0)).unwrap();
        assert!((v.re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn forms_agree_on_the_overlap() {
        let cand = cayley();
        let poly = cand.h.polynomial().unwrap();
        let z = [c(0.3, 0.2), c(1.5, -0.7)];
        for k in 0..16 {
            let l = C64::from_polar(PSI_CROSSOVER * (1.0 + k as f64 / 4.0), k as f64);
            let a = psi_quotient_form(&cand.rep, &poly, &z, l);
            let b = psi_series_form(&cand.rep, &poly, &z, l);
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn cayley_psi_has_closed_form() {
        // Re psi_z(l) = -2 (1 - Re l) Re z_2 for this pair.
        let cand = cayley();
        let z = [c(0.4, 0.1), c(0.9, 3.0)];
        for k in 0..16 {
            let l = C64::from_polar(0.06 * k as f64, 0.9 * k as f64);
            let v = eval_psi(&cand, &cand.h, &z, l).unwrap();
            assert!((v.re + 2.0 * (1.0 - l.re) * z[1].re).abs() < 1e-10);
        }
    }
}
