use std::path::Path;

use anyhow::Result;
use geolab_core::semitube::{
    cconvexity_scan, convexity_check, convexity_harness, linear_convexity_scan, ConvexityConfig,
    FiberConfig, HarnessConfig, LinearScanConfig, ScanConfig, ScanReport, SemitubeBase,
};
use geolab_core::Execution;
use serde::Serialize;

use crate::cli::{ScanArgs, SemitubeCmd};
use crate::{inputs, report, svg, EXIT_OK, EXIT_REJECTED, EXIT_VIOLATIONS};

#[derive(Serialize)]
struct Input<'a, C> {
    base: &'a SemitubeBase,
    #[serde(flatten)]
    config: C,
}

fn scan_config(args: &ScanArgs, execution: Execution) -> ScanConfig {
    ScanConfig {
        count: args.lines,
        seed: args.seed,
        window: args.window,
        resolution: args.res,
        execution,
    }
}

/// Writes `violation.svg` into `dir` when the scan found one.
fn violation_svg(dir: Option<&Path>, scan: &ScanReport) -> Result<()> {
    if let (Some(dir), Some(raster)) =
        (dir, scan.violation.as_ref().and_then(|v| v.raster.as_ref()))
    {
        report::write(&dir.join("violation.svg"), &svg::raster(raster))?;
    }
    Ok(())
}

pub fn run(cmd: SemitubeCmd, execution: Execution) -> Result<u8> {
    match cmd {
        SemitubeCmd::Scan { base, scan, output } => {
            let base = inputs::base(&base)?;
            let cfg = scan_config(&scan, execution);
            let result = cconvexity_scan(&base, &cfg)?;
            violation_svg(output.svg.as_deref(), &result)?;
            let code = if result.violation.is_some() {
                EXIT_VIOLATIONS
            } else {
                EXIT_OK
            };
            report::emit(
                "semitube scan",
                code,
                Input {
                    base: &base,
                    config: &cfg,
                },
                &result,
                output.out.as_deref(),
                None,
            )?;
            Ok(code)
        }
        SemitubeCmd::Convexity {
            base,
            pairs,
            seed,
            output,
        } => {
            let base = inputs::base(&base)?;
            let cfg = ConvexityConfig { pairs, seed };
            let result = convexity_check(&base, &cfg)?;
            report::emit(
                "semitube convexity",
                EXIT_OK,
                Input {
                    base: &base,
                    config: &cfg,
                },
                &result,
                output.out.as_deref(),
                None,
            )?;
            Ok(EXIT_OK)
        }
        SemitubeCmd::Harness {
            base,
            scan,
            pairs,
            fiber_points,
            output,
        } => {
            let base = inputs::base(&base)?;
            let cfg = HarnessConfig {
                fiber: FiberConfig {
                    points: fiber_points,
                    seed: scan.seed,
                    execution,
                    ..FiberConfig::default()
                },
                convexity: ConvexityConfig {
                    pairs,
                    seed: scan.seed,
                },
                scan: scan_config(&scan, execution),
            };
            let result = convexity_harness(&base, &cfg)?;
            violation_svg(output.svg.as_deref(), &result.scan)?;
            let code = if result.consistent {
                EXIT_OK
            } else {
                EXIT_REJECTED
            };
            report::emit(
                "semitube harness",
                code,
                Input {
                    base: &base,
                    config: &cfg,
                },
                &result,
                output.out.as_deref(),
                None,
            )?;
            Ok(code)
        }
        SemitubeCmd::Linconvex {
            base,
            points,
            seed,
            step_deg,
            output,
        } => {
            let base = inputs::base(&base)?;
            let cfg = LinearScanConfig {
                exterior: points,
                seed,
                grid_step_deg: step_deg,
                execution,
                ..LinearScanConfig::default()
            };
            let result = linear_convexity_scan(&base, &cfg)?;
            let code = if result.all_succeeded() {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            };
            report::emit(
                "semitube linconvex",
                code,
                Input {
                    base: &base,
                    config: &cfg,
                },
                &result,
                output.out.as_deref(),
                None,
            )?;
            Ok(code)
        }
    }
}
