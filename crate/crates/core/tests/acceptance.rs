//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use common::*;
use geolab_core::circle::{hardy_residual, schwarz_extend, BoundaryMeasure};
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::{
    atom_compatibility, boundary_data_from_h, certify, connect, mobius_reparametrize, reconstruct,
    sibling_variation, CertifyConfig, ConnectConfig, ConnectStatus, GeodesicCandidate, Verdict,
};
use geolab_core::hclass::HParams;
use geolab_core::semitube::{
    alpha_from_b, b_from_alpha, convexity_harness, hyperplane_from_b, lift_iota, project_pi,
    HarnessConfig, ScanConfig, SemitubeBase,
};
use geolab_core::{Mixed, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const C1_TOL: f64 = 1e-10;
const C1_TIME: Duration = Duration::from_secs(1);
const C2_TOL: f64 = 1e-8;
const C3_MIN_RESIDUAL: f64 = 0.99;
const C4_TOL: f64 = 1e-6;
const C4_ATOM_TOL: f64 = 1e-12;
const C5_SIGMA: f64 = 0.5;
const C5_TOL: f64 = 1e-6;
const C5_STARTS: usize = 16;
const C5_TIME: Duration = Duration::from_secs(30);
const C6_SCALES: [f64; 3] = [0.5, 2.0, 10.0];
const C6_MOBIUS: usize = 10;
const C6_SEEDS: std::ops::Range<u64> = 0..5;
const C7_TIME: Duration = Duration::from_secs(300);
const C8_VECTORS: usize = 1000;
const C8_MIN_AGREEMENT: usize = 999;

type Check = Result<(bool, String)>;

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn criterion1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let coeffs: Vec<C64> = (0..=32)
        .map(|_| c(gaussian(&mut rng), gaussian(&mut rng)))
        .collect();
    let p = |l: C64| coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * l + a);
    let measure = BoundaryMeasure::from_density(grid(), 1, 0, |l| vec![p(l).re])?;
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let l = C64::from_polar(
            0.9 * rng.random::<f64>().sqrt(),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let s = schwarz_extend(&measure, &[coeffs[0].im], l)?;
        err = err.max((s[0] - p(l)).norm());
    }
    let elapsed = start.elapsed();
    Ok((
        err <= C1_TOL && elapsed < C1_TIME,
        format!("max error {err:.2e} (tol {C1_TOL:.0e}), {elapsed:?}"),
    ))
}

fn criterion2() -> Check {
    let cand = semiball();
    let mut err: f64 = 0.0;
    for l in grid().nodes() {
        let phi = cand.eval(l);
        err = err
            .max((phi[0] - l * FRAC_1_SQRT_2).norm())
            .max((phi[1] - FRAC_1_SQRT_2).norm());
    }
    let r = certify(&cand, &semiball_h(), &CertifyConfig::default())?;
    let psi_err = (r.psi_at_zero + FRAC_1_SQRT_2).abs();
    Ok((
        err <= C2_TOL && r.verdict == Verdict::Certified && psi_err <= C2_TOL,
        format!(
            "node error {err:.2e}, verdict {}, psi_at_zero {:.12}",
            r.verdict.label(),
            r.psi_at_zero
        ),
    ))
}

fn criterion3() -> Check {
    let dom = DomainDescriptor::builtin("semiball")?;
    let h = conjugate_h();
    let residual = hardy_residual(&boundary_data_from_h(&dom, &h, grid(), &[])?, 0)?.value;
    let cand = reconstruct(&dom, &h, grid(), &[], &[0.0])?;
    let verdict = certify(&cand, &h, &CertifyConfig::default())?.verdict;
    Ok((
        residual >= C3_MIN_RESIDUAL && verdict == Verdict::Rejected("holomorphy".into()),
        format!(
            "component-1 hardy residual {residual:.6}, verdict {}",
            verdict.label()
        ),
    ))
}

fn criterion4() -> Check {
    let cand = cayley();
    let mut err: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for k in 0..40 {
        let l = C64::from_polar(0.9 * (k % 10) as f64 / 9.0, 0.7 * k as f64);
        let phi = cand.eval(l);
        err = err
            .max(phi[0].norm())
            .max((phi[1] - (1.0 + l) / (1.0 - l)).norm());
        oracle = oracle.max(((phi[1] - 1.0) / (phi[1] + 1.0) - l).norm());
    }
    let compat = atom_compatibility(&cayley_h(), &[cayley_atom()])?;
    let cfg = CertifyConfig::default();
    let verdict = certify(&cand, &cayley_h(), &cfg)?.verdict;
    let (_, sibling, _) = sibling_variation(&cand, &cayley_h(), vec![], vec![0.0], &cfg)?;
    Ok((
        err <= C4_TOL
            && oracle <= C4_TOL
            && compat <= C4_ATOM_TOL
            && verdict == Verdict::Certified
            && sibling == Verdict::BoundaryDegenerate,
        format!(
            "phi error {err:.2e}, left-inverse error {oracle:.2e}, atom residual {compat:.1e}, verdict {}, sibling {}",
            verdict.label(),
            sibling.label()
        ),
    ))
}

fn criterion5() -> Check {
    let start = Instant::now();
    let dom = DomainDescriptor::builtin("paraboloid")?;
    let cfg = ConnectConfig {
        starts: C5_STARTS,
        ..ConnectConfig::default()
    };
    let out = connect(
        &dom,
        &[c(0.0, 0.0), c(1.0, 0.0)],
        &[c(0.0, 0.0), c(3.0, 0.0)],
        &cfg,
    )?;
    let elapsed = start.elapsed();
    let certified = out
        .report
        .as_ref()
        .is_some_and(|r| r.verdict.is_certified());
    Ok((
        out.status == ConnectStatus::Success
            && certified
            && (out.sigma - C5_SIGMA).abs() <= C5_TOL
            && out.starts.len() <= C5_STARTS
            && elapsed < C5_TIME,
        format!(
            "status {}, sigma {:.10}, start {} of {} run, {elapsed:?}",
            match out.status {
                ConnectStatus::Success => "success",
                ConnectStatus::Degenerate => "degenerate",
                ConnectStatus::NoConvergence => "no_convergence",
            },
            out.sigma,
            out.start.map_or("none".to_string(), |s| s.to_string()),
            out.starts.len()
        ),
    ))
}

fn verdict_of(cand: &GeodesicCandidate, h: &HParams) -> Result<Verdict> {
    Ok(certify(cand, h, &CertifyConfig::default())?.verdict)
}

fn criterion6() -> Check {
    let mut failures = Vec::new();
    let semiball_dom = DomainDescriptor::builtin("semiball")?;
    let paraboloid = DomainDescriptor::builtin("paraboloid")?;
    let fixtures: [(&str, &DomainDescriptor, HParams, Vec<_>); 3] = [
        ("semiball", &semiball_dom, semiball_h(), vec![]),
        ("conjugate", &semiball_dom, conjugate_h(), vec![]),
        ("cayley", &paraboloid, cayley_h(), vec![cayley_atom()]),
    ];
    for (name, dom, h, atoms) in &fixtures {
        let base = verdict_of(&reconstruct(dom, h, grid(), atoms, &[0.0])?, h)?;
        for t in C6_SCALES {
            let ht = h.scaled(t);
            let v = verdict_of(&reconstruct(dom, &ht, grid(), atoms, &[0.0])?, &ht)?;
            if v != base {
                failures.push(format!(
                    "{name} scaled by {t}: {} vs {}",
                    v.label(),
                    base.label()
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (name, cand) in [("semiball", semiball()), ("cayley", cayley())] {
        let base = verdict_of(&cand, &cand.h)?;
        for _ in 0..C6_MOBIUS {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let w = C64::from_polar(
                0.5 * rng.random::<f64>().sqrt(),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let moved = mobius_reparametrize(&cand, theta, w)?;
            let v = verdict_of(&moved, &moved.h)?;
            if v != base {
                failures.push(format!(
                    "{name} under (theta {theta:.3}, w {w:.3}): {}",
                    v.label()
                ));
            }
        }
    }
    let mut cone_checks = 0;
    for seed in C6_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for name in DOMAINS {
            let dom = DomainDescriptor::builtin(name)?;
            let zs = dom.sample_interior(&mut rng, 50);
            for _ in 0..50 {
                let v = Mixed::new(
                    (0..dom.n() - dom.d())
                        .map(|_| c(gaussian(&mut rng), gaussian(&mut rng)))
                        .collect(),
                    (0..dom.d()).map(|_| gaussian(&mut rng)).collect(),
                );
                if !dom.in_wd(&v) {
                    continue;
                }
                let Some(p) = dom.support_point(&v)? else {
                    continue;
                };
                let t = rng.random_range(0.1..10.0);
                let scaled = dom.support_point(&v.scale(t))?;
                let same = scaled
                    .is_some_and(|s| s.point.distance(&p.point) <= 1e-12 * p.point.norm().max(1.0));
                if !dom.in_wd(&v.scale(t)) || !same {
                    failures.push(format!(
                        "{name} seed {seed}: cone invariance fails for {v:?}"
                    ));
                }
                let pz = p.point.to_complex();
                let top = v.re_dot(&pz);
                if let Some(z) = zs
                    .iter()
                    .find(|z| v.re_dot(z) - top >= 1e-12 || (v.re_dot(z) - top).is_nan())
                {
                    failures.push(format!(
                        "{name} seed {seed}: support inequality fails at {z:?}"
                    ));
                }
                cone_checks += 1;
            }
        }
    }
    let detail = if failures.is_empty() {
        format!(
            "{} scaling, {} Möbius and {cone_checks} cone/support checks agree",
            3 * C6_SCALES.len(),
            2 * C6_MOBIUS
        )
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty(), detail))
}

fn criterion7() -> Check {
    let start = Instant::now();
    let run = |base: &SemitubeBase, count: usize| {
        let cfg = HarnessConfig {
            scan: ScanConfig {
                count,
                ..ScanConfig::default()
            },
            ..HarnessConfig::default()
        };
        convexity_harness(base, &cfg)
    };
    let ball = run(&SemitubeBase::ball(), 500)?;
    let dumbbell = run(&SemitubeBase::dumbbell(), 2000)?;
    let slit = run(&SemitubeBase::slit_disc(), 500)?;
    let elapsed = start.elapsed();
    let ball_ok = ball.consistent && ball.scan_clean && ball.scan.lines_scanned == 500;
    let dumbbell_ok = dumbbell.consistent
        && dumbbell.scan.violation.as_ref().is_some_and(|v| {
            v.topology.stable
                && v.confirmation.components == v.topology.report.components
                && !v.confirmation.is_clean()
        });
    let slit_ok = !slit.fiber.holds
        && !slit.convexity.convex
        && slit.convexity.witness.is_some()
        && slit.scan_clean
        && slit.scan.lines_scanned == 500;
    let violation = dumbbell.scan.violation.as_ref();
    Ok((
        ball_ok && dumbbell_ok && slit_ok && elapsed < C7_TIME,
        format!(
            "ball clean {}/{}; dumbbell {}; slit fiber {}, convex {}, clean {}; {elapsed:?}",
            ball.scan.clean,
            ball.scan.lines_scanned,
            violation.map_or("no violation".to_string(), |v| format!(
                "violation at line {} ({} components, {} holes)",
                v.index, v.topology.report.components, v.topology.report.holes
            )),
            slit.fiber.holds,
            slit.convexity.convex,
            slit.scan_clean
        ),
    ))
}

fn criterion8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut exact = 0;
    for k in 0..C8_VECTORS {
        let b: Vec<f64> = (0..2).map(|_| gaussian(&mut rng)).collect();
        let codim = if k % 2 == 0 { 1 } else { 2 };
        if b_from_alpha(&alpha_from_b(&b, codim)?)? == b {
            exact += 1;
        }
    }
    let mut agree = 0;
    for _ in 0..C8_VECTORS {
        let a: Vec<f64> = (0..3).map(|_| gaussian(&mut rng)).collect();
        let b: Vec<f64> = (0..2).map(|_| gaussian(&mut rng)).collect();
        let h = hyperplane_from_b(&a, &b, 1)?;
        let alpha = alpha_from_b(&b, 1)?;
        let ia = lift_iota(&a);
        // A point of L maps into H.
        let z1 = c(gaussian(&mut rng), gaussian(&mut rng));
        let z2 = ia[1] - alpha[0] * (z1 - ia[0]);
        let on_h = h.contains(&project_pi(&[z1, z2]), 1e-9);
        // A point of H lifts into L.
        let x = [gaussian(&mut rng), gaussian(&mut rng)];
        let dx = [x[0] - a[0], x[1] - a[1]];
        let x3 = a[2] - (b[0] * dx[0] + b[1] * dx[1]);
        let im = -(h.b_tilde[0] * dx[0] + h.b_tilde[1] * dx[1]);
        let z = [c(x[0], x[1]), c(x3, im)];
        let on_l = (alpha[0] * (z[0] - ia[0]) + alpha[1] * (z[1] - ia[1])).norm() <= 1e-9;
        if on_h && on_l {
            agree += 1;
        }
    }
    Ok((
        exact == C8_VECTORS && agree >= C8_MIN_AGREEMENT,
        format!(
            "exact round trips {exact}/{C8_VECTORS}, membership agreement {agree}/{C8_VECTORS}"
        ),
    ))
}

type Criterion = fn() -> Check;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("spectral round trip", criterion1),
        ("semiball pipeline", criterion2),
        ("rejection fixture", criterion3),
        ("paraboloid atom fixture", criterion4),
        ("connect", criterion5),
        ("invariance suite", criterion6),
        ("semitube harness", criterion7),
        ("correspondence", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
