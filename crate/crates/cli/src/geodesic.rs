use anyhow::{anyhow, Result};
use geolab_core::circle::{Atom, CircleGrid};
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::{
    certify, connect, reconstruct, sibling_variation, CertificationReport, CertifyConfig,
    ConnectConfig, ConnectOutcome, ConnectStatus, GeodesicCandidate, Verdict,
};
use geolab_core::hclass::{ClassReport, HParams};
use geolab_core::{Execution, C64};
use serde::Serialize;

use crate::cli::{CertifyArgs, GeodesicCmd, OutputArgs};
use crate::{inputs, report, svg, EXIT_DEGENERATE, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_REJECTED};

fn certify_config(args: &CertifyArgs, execution: Execution) -> Result<CertifyConfig> {
    let mut cfg = CertifyConfig {
        seed: args.sample_seed,
        execution,
        ..CertifyConfig::default()
    };
    let overrides = [
        (&mut cfg.tol_psi, args.tol_psi),
        (&mut cfg.tol_nd, args.tol_nd),
        (&mut cfg.tol_holo, args.tol_holo),
        (&mut cfg.tol_atom, args.tol_atom),
        (&mut cfg.tol_support, args.tol_support),
    ];
    for (slot, value) in overrides {
        if let Some(v) = value {
            *slot = v;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::BoundaryDegenerate => EXIT_DEGENERATE,
        Verdict::Rejected(_) => EXIT_REJECTED,
    }
}

fn load_h(arg: &str) -> Result<HParams> {
    let h: HParams = inputs::json("h", arg)?;
    h.validate().map_err(|e| anyhow!("--h: {e}"))?;
    Ok(h)
}

fn emit_candidate<C: Serialize, R: Serialize>(
    command: &str,
    code: u8,
    config: C,
    result: R,
    cand: Option<&GeodesicCandidate>,
    output: &OutputArgs,
) -> Result<()> {
    if let (Some(path), Some(cand)) = (&output.svg, cand) {
        report::write(path, &svg::candidate(cand))?;
    }
    report::emit(
        command,
        code,
        config,
        result,
        output.out.as_deref(),
        cand.map(|c| c.boundary.to_csv()),
    )
}

#[derive(Serialize)]
struct ComputeConfig<'a> {
    domain: &'a DomainDescriptor,
    h: &'a HParams,
    atoms: &'a [Atom],
    imconst: &'a [f64],
    grid_size: usize,
    certify: &'a CertifyConfig,
}

#[derive(Serialize)]
struct CertifiedCandidate<'a> {
    verdict: String,
    class: Option<ClassReport>,
    report: &'a CertificationReport,
    candidate: &'a GeodesicCandidate,
}

#[derive(Serialize)]
struct CertifyInput<'a> {
    h: &'a HParams,
    certify: &'a CertifyConfig,
}

#[derive(Serialize)]
struct ConnectInput<'a> {
    domain: &'a DomainDescriptor,
    p: &'a [C64],
    q: &'a [C64],
    connect: &'a ConnectConfig,
}

#[derive(Serialize)]
struct SiblingInput<'a> {
    h: &'a HParams,
    atoms: &'a [Atom],
    imconst: &'a [f64],
    certify: &'a CertifyConfig,
}

#[derive(Serialize)]
struct SiblingResult<'a> {
    verdict: String,
    report: Option<&'a CertificationReport>,
    candidate: &'a GeodesicCandidate,
}

pub fn run(cmd: GeodesicCmd, execution: Execution) -> Result<u8> {
    match cmd {
        GeodesicCmd::Compute {
            domain,
            h,
            atoms,
            imconst,
            grid,
            certify: cargs,
            output,
        } => {
            let domain = inputs::domain(&domain)?;
            let h = load_h(&h)?;
            let atoms: Vec<Atom> = atoms
                .map(|a| inputs::json("atoms", &a))
                .transpose()?
                .unwrap_or_default();
            let imconst = imconst.unwrap_or_else(|| vec![0.0; domain.d()]);
            let grid_size = grid;
            let grid = CircleGrid::new(grid_size).map_err(|e| anyhow!("--grid: {e}"))?;
            let cfg = certify_config(&cargs, execution)?;
            let cand = reconstruct(&domain, &h, grid, &atoms, &imconst)?;
            let rep = certify(&cand, &h, &cfg)?;
            let code = verdict_code(&rep.verdict);
            let config = ComputeConfig {
                domain: &domain,
                h: &h,
                atoms: &atoms,
                imconst: &imconst,
                grid_size,
                certify: &cfg,
            };
            let result = CertifiedCandidate {
                verdict: rep.verdict.label(),
                class: Some(h.validate_class(grid)),
                report: &rep,
                candidate: &cand,
            };
            emit_candidate(
                "geodesic compute",
                code,
                config,
                result,
                Some(&cand),
                &output,
            )?;
            Ok(code)
        }
        GeodesicCmd::Certify {
            candidate,
            h,
            certify: cargs,
            output,
        } => {
            let cand = inputs::candidate(&candidate)?;
            let h = match h {
                Some(h) => load_h(&h)?,
                None => cand.h.clone(),
            };
            let cfg = certify_config(&cargs, execution)?;
            let rep = certify(&cand, &h, &cfg)?;
            let code = verdict_code(&rep.verdict);
            let result = CertifiedCandidate {
                verdict: rep.verdict.label(),
                class: Some(h.validate_class(cand.grid())),
                report: &rep,
                candidate: &cand,
            };
            let config = CertifyInput {
                h: &h,
                certify: &cfg,
            };
            emit_candidate(
                "geodesic certify",
                code,
                config,
                result,
                Some(&cand),
                &output,
            )?;
            Ok(code)
        }
        GeodesicCmd::Connect {
            domain,
            p,
            q,
            seed,
            starts,
            max_iterations,
            grid,
            free_degree,
            certify: cargs,
            output,
        } => {
            let domain = inputs::domain(&domain)?;
            let p: Vec<C64> = inputs::json("p", &p)?;
            let q: Vec<C64> = inputs::json("q", &q)?;
            let cfg = ConnectConfig {
                seed,
                starts,
                max_iterations,
                grid_size: grid,
                free_degree,
                certify: certify_config(&cargs, execution)?,
                execution,
                ..ConnectConfig::default()
            };
            let outcome: ConnectOutcome = connect(&domain, &p, &q, &cfg)?;
            let code = match outcome.status {
                ConnectStatus::Success => EXIT_OK,
                ConnectStatus::Degenerate => EXIT_DEGENERATE,
                ConnectStatus::NoConvergence => EXIT_NO_CONVERGENCE,
            };
            let config = ConnectInput {
                domain: &domain,
                p: &p,
                q: &q,
                connect: &cfg,
            };
            emit_candidate(
                "geodesic connect",
                code,
                config,
                &outcome,
                outcome.candidate.as_ref(),
                &output,
            )?;
            Ok(code)
        }
        GeodesicCmd::Sibling {
            candidate,
            h,
            atoms,
            imconst,
            certify: cargs,
            output,
        } => {
            let cand = inputs::candidate(&candidate)?;
            let h = match h {
                Some(h) => load_h(&h)?,
                None => cand.h.clone(),
            };
            let atoms: Vec<Atom> = inputs::json("atoms", &atoms)?;
            let imconst = imconst.unwrap_or_else(|| cand.rep.imconst().to_vec());
            let cfg = certify_config(&cargs, execution)?;
            let (tau, verdict, rep) =
                sibling_variation(&cand, &h, atoms.clone(), imconst.clone(), &cfg)?;
            let code = verdict_code(&verdict);
            let config = SiblingInput {
                h: &h,
                atoms: &atoms,
                imconst: &imconst,
                certify: &cfg,
            };
            let result = SiblingResult {
                verdict: verdict.label(),
                report: rep.as_ref(),
                candidate: &tau,
            };
            emit_candidate(
                "geodesic sibling",
                code,
                config,
                result,
                Some(&tau),
                &output,
            )?;
            Ok(code)
        }
    }
}
