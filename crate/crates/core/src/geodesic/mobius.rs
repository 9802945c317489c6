use std::f64::consts::FRAC_1_PI;

use super::pipeline::GeodesicCandidate;
use crate::circle::{Atom, BoundarySignal, HoloRep};
use crate::{Error, Result, C64};

/// `m(l) = e^{i theta} (l - w) / (1 - conj(w) l)`.
pub fn mobius_point(theta: f64, w: C64, lambda: C64) -> C64 {
    C64::from_polar(1.0, theta) * (lambda - w) / (1.0 - w.conj() * lambda)
}

fn mobius_inverse(theta: f64, w: C64, mu: C64) -> C64 {
    let u = C64::from_polar(1.0, -theta) * mu;
    (u + w) / (1.0 + w.conj() * u)
}

/// The candidate `phi o m` with its dual map transformed alongside.
///
/// The absolutely continuous part is resampled at `m(l_k)` and
/// re-spectralized; each atom at `l0` moves to `m^{-1}(l0)` with its weight
/// multiplied by the Poisson kernel of `l0` at `m(0)`.
pub fn mobius_reparametrize(
    candidate: &GeodesicCandidate,
    theta: f64,
    w: C64,
) -> Result<GeodesicCandidate> {
    if !(w.norm() < 1.0) {
        return Err(Error::Argument(format!(
            "automorphism centre |w| = {} is not inside the disc",
            w.norm()
        )));
    }
    let rep = &candidate.rep;
    let grid = candidate.grid();
    let n = rep.n();
    let d = rep.d();
    let mapped: Vec<C64> = grid.nodes().map(|l| mobius_point(theta, w, l)).collect();

    let regular = BoundarySignal::sample(grid, n, |l| rep.eval_regular(mobius_point(theta, w, l)))?;
    let max = grid.max_degree();
    let mut taylor: Vec<Vec<C64>> = (0..n)
        .map(|j| regular.coefficients().analytic_part(j, max))
        .collect();
    let mut imconst = vec![0.0; d];
    for (ic, t) in imconst.iter_mut().zip(&mut taylor[n - d..]) {
        *ic = t[0].im;
        t[0].im = 0.0;
    }

    let m0 = mobius_point(theta, w, C64::new(0.0, 0.0));
    let atoms = rep
        .atoms()
        .iter()
        .map(|a| {
            let l0 = a.point();
            let beta = (1.0 - m0.norm_sqr()) / (l0 - m0).norm_sqr();
            let shift = ((l0 + m0) / (l0 - m0)).im * a.alpha() * 0.5 * FRAC_1_PI;
            for (ic, r) in imconst.iter_mut().zip(a.rho()) {
                *ic += shift * r;
            }
            Atom::new(
                mobius_inverse(theta, w, l0).arg(),
                a.alpha() * beta,
                a.rho().to_vec(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let values = (0..n)
        .map(|j| {
            mapped
                .iter()
                .map(|mu| candidate.boundary.interpolate(j, mu.arg()))
                .collect()
        })
        .collect();
    Ok(GeodesicCandidate {
        rep: HoloRep::new(d, taylor, atoms, imconst)?,
        domain: candidate.domain.clone(),
        h: candidate.h.mobius(theta, w)?,
        boundary: BoundarySignal::new(grid, values)?,
    })
}
