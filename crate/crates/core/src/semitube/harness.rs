use serde::{Deserialize, Serialize};

use super::scan::{cconvexity_scan, convexity_check, fiber_condition_check};
use super::{
    ConvexityConfig, ConvexityReport, FiberConfig, FiberReport, ScanConfig, ScanReport,
    SemitubeBase,
};
use crate::Result;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessConfig {
    pub fiber: FiberConfig,
    pub convexity: ConvexityConfig,
    pub scan: ScanConfig,
}

/// Evidence for "convex iff C-convex" on one base.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessRecord {
    pub base: String,
    pub fiber: FiberReport,
    pub convexity: ConvexityReport,
    pub scan: ScanReport,
    /// The fiber condition holds, so the equivalence is asserted.
    pub equivalence_applies: bool,
    /// No confirmed section violation.
    pub scan_clean: bool,
    /// `equivalence_applies` implies `convex == scan_clean`.
    pub consistent: bool,
    pub note: String,
}

pub fn convexity_harness(base: &SemitubeBase, config: &HarnessConfig) -> Result<HarnessRecord> {
    let fiber = fiber_condition_check(base, &config.fiber)?;
    let convexity = convexity_check(base, &config.convexity)?;
    let scan = cconvexity_scan(base, &config.scan)?;
    let equivalence_applies = fiber.holds;
    let scan_clean = scan.violation.is_none();
    let consistent = !equivalence_applies || convexity.convex == scan_clean;
    let note = match (equivalence_applies, convexity.convex, scan_clean) {
        (true, true, true) => "convex base, clean scan".to_string(),
        (true, false, false) => "non-convex base, section violation found".to_string(),
        (true, true, false) => "convex base but a section violation was confirmed".to_string(),
        (true, false, true) => "non-convex base but no section violation within the sampled lines".to_string(),
        (false, convex, clean) => format!(
            "fiber condition fails: equivalence not asserted (convex: {convex}, clean scan: {clean})"
        ),
    };
    Ok(HarnessRecord {
        base: base.name.clone(),
        fiber,
        convexity,
        scan,
        equivalence_applies,
        scan_clean,
        consistent,
        note,
    })
}
