use serde::{Deserialize, Serialize};

use super::raster::{line_section, ComplexLine, RasterConfig, SectionRaster};
use super::SemitubeBase;
use crate::Result;

/// Component and hole counts of a section raster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    /// 4-connected components of occupied pixels.
    pub components: usize,
    /// 4-connected components of free pixels that do not reach the frame.
    pub holes: usize,
    pub resolution: usize,
    /// Pixels between the occupied set and the nearest frame side; `None`
    /// for an empty section.
    pub margin: Option<usize>,
    pub sides_touched: usize,
    /// The section leaves the window on at least two sides.
    pub inconclusive: bool,
}

impl TopologyReport {
    pub fn is_empty(&self) -> bool {
        self.components == 0
    }

    /// Connected and simply connected.
    pub fn is_clean(&self) -> bool {
        self.components == 1 && self.holes == 0
    }

    /// Same counts and the same inconclusive flag.
    pub fn agrees_with(&self, other: &TopologyReport) -> bool {
        self.components == other.components
            && self.holes == other.holes
            && self.inconclusive == other.inconclusive
    }
}

fn count_components(m: usize, mask: &[bool], want: bool) -> (usize, usize) {
    let mut seen = vec![false; m * m];
    let mut stack = Vec::new();
    let (mut total, mut interior) = (0, 0);
    for start in 0..m * m {
        if seen[start] || mask[start] != want {
            continue;
        }
        total += 1;
        let mut touches_frame = false;
        seen[start] = true;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (i, j) = (p % m, p / m);
            if i == 0 || j == 0 || i == m - 1 || j == m - 1 {
                touches_frame = true;
            }
            let mut visit = |q: usize| {
                if !seen[q] && mask[q] == want {
                    seen[q] = true;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(p - 1);
            }
            if i + 1 < m {
                visit(p + 1);
            }
            if j > 0 {
                visit(p - m);
            }
            if j + 1 < m {
                visit(p + m);
            }
        }
        if !touches_frame {
            interior += 1;
        }
    }
    (total, interior)
}

pub fn topology(raster: &SectionRaster) -> TopologyReport {
    let m = raster.resolution();
    let mask = raster.mask();
    let (components, _) = count_components(m, mask, true);
    let (_, holes) = count_components(m, mask, false);
    let margin = (0..m * m)
        .filter(|&p| mask[p])
        .map(|p| {
            let (i, j) = (p % m, p / m);
            i.min(j).min(m - 1 - i).min(m - 1 - j)
        })
        .min();
    let sides_touched = raster.sides_touched();
    TopologyReport {
        components,
        holes,
        resolution: m,
        margin,
        sides_touched,
        inconclusive: sides_touched >= 2,
    }
}

/// Topology at resolution `m` together with the `2m` re-run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionTopology {
    pub report: TopologyReport,
    /// `None` when the section is empty at `m`.
    pub doubled: Option<TopologyReport>,
    pub stable: bool,
}

/// Rasterizes the section at `m` and `2m` and compares the counts.
pub fn section_topology(
    base: &SemitubeBase,
    line: &ComplexLine,
    config: &RasterConfig,
) -> Result<(SectionRaster, SectionTopology)> {
    let raster = line_section(base, line, config)?;
    let report = topology(&raster);
    if report.is_empty() {
        return Ok((
            raster,
            SectionTopology {
                report,
                doubled: None,
                stable: true,
            },
        ));
    }
    let doubled = topology(&line_section(base, line, &config.scaled(2))?);
    let stable = report.agrees_with(&doubled);
    Ok((
        raster,
        SectionTopology {
            report,
            doubled: Some(doubled),
            stable,
        },
    ))
}
