use super::certify::{certify, CertificationReport, CertifyConfig, Verdict};
use super::pipeline::{atom_compatibility, GeodesicCandidate};
use crate::circle::{split_parts, Atom, HoloRep};
use crate::hclass::HParams;
use crate::{Error, Result};

/// Keeps the absolutely continuous part of `phi` and swaps in a new singular
/// part and new imaginary constants. The result either maps the disc into the
/// boundary or is certified again.
pub fn sibling_variation(
    candidate: &GeodesicCandidate,
    h: &HParams,
    atoms: Vec<Atom>,
    imconst: Vec<f64>,
    config: &CertifyConfig,
) -> Result<(GeodesicCandidate, Verdict, Option<CertificationReport>)> {
    let domain = &candidate.domain;
    if let Some(a) = atoms
        .iter()
        .find(|a| a.rho().len() != domain.d() || !domain.in_sd(a.rho()))
    {
        return Err(Error::Precondition(format!(
            "atom direction {:?} is not in S_D",
            a.rho()
        )));
    }
    let residual = atom_compatibility(h, &atoms)?;
    if !(residual <= config.tol_atom) {
        return Err(Error::Precondition(format!(
            "atoms are incompatible with h (residual {residual:e})"
        )));
    }
    let (absolutely_continuous, _) = split_parts(&candidate.rep);
    let rep = HoloRep::new(
        absolutely_continuous.d(),
        absolutely_continuous.taylor().to_vec(),
        atoms,
        imconst,
    )?;
    let tau = GeodesicCandidate {
        rep,
        ..candidate.clone()
    };
    if !domain.contains(&tau.center()).inside {
        return Ok((tau, Verdict::BoundaryDegenerate, None));
    }
    let report = certify(&tau, h, config)?;
    Ok((tau, report.verdict.clone(), Some(report)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::circle::CircleGrid;
    use crate::domains::DomainDescriptor;
    use crate::geodesic::reconstruct;
    use crate::hclass::Constrained;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
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
    fn doubled_atom_stays_certified() {
        let cand = cayley();
        let atom = Atom::new(0.0, 2.0 * TAU, vec![1.0]).unwrap();
        let (tau, v, _) = sibling_variation(
            &cand,
            &cand.h,
            vec![atom],
            vec![0.0],
            &CertifyConfig::default(),
        )
        .unwrap();
        assert_eq!(v, Verdict::Certified);
        let l = c(0.3, 0.4);
        assert!((tau.eval(l)[1] - 2.0 * (1.0 + l) / (1.0 - l)).norm() < 1e-12);
    }

    #[test]
    fn dropping_the_atom_lands_in_the_boundary() {
        let cand = cayley();
        let (tau, v, report) =
            sibling_variation(&cand, &cand.h, vec![], vec![0.7], &CertifyConfig::default())
                .unwrap();
        assert_eq!(v, Verdict::BoundaryDegenerate);
        assert!(report.is_none());
        assert_eq!(tau.center()[1], c(0.0, 0.7));
    }

    #[test]
    fn semiball_refuses_atoms() {
        let dom = DomainDescriptor::builtin("semiball").unwrap();
        let h = HParams::new(
            vec![vec![c(1.0, 0.0)]],
            vec![Constrained::pair(c(0.0, 0.0), 1.0)],
        )
        .unwrap();
        let cand = reconstruct(&dom, &h, CircleGrid::new(256).unwrap(), &[], &[0.0]).unwrap();
        let atom = Atom::new(1.0, 0.5, vec![1.0]).unwrap();
        assert!(matches!(
            sibling_variation(&cand, &h, vec![atom], vec![0.0], &CertifyConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn incompatible_atom_is_refused() {
        let cand = cayley();
        let atom = Atom::new(1.0, 1.0, vec![1.0]).unwrap();
        assert!(matches!(
            sibling_variation(
                &cand,
                &cand.h,
                vec![atom],
                vec![0.0],
                &CertifyConfig::default()
            ),
            Err(Error::Precondition(_))
        ));
    }
}
