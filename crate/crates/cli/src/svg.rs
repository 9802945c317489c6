//! Hand-written SVG views of candidates and section rasters.

use std::fmt::Write;

use geolab_core::geodesic::GeodesicCandidate;
use geolab_core::semitube::SectionRaster;
use geolab_core::C64;

const PANEL: f64 = 320.0;
const PAD: f64 = 24.0;
const RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.9];
const COLORS: [&str; 4] = ["#c6dbef", "#6baed6", "#2171b5", "#08306b"];

struct Frame {
    lo: [f64; 2],
    scale: f64,
    x0: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = C64>, x0: f64) -> Frame {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points.filter(|p| p.re.is_finite() && p.im.is_finite()) {
            lo = [lo[0].min(p.re), lo[1].min(p.im)];
            hi = [hi[0].max(p.re), hi[1].max(p.im)];
        }
        if !lo[0].is_finite() {
            lo = [-1.0, -1.0];
            hi = [1.0, 1.0];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        Frame {
            lo: [mid[0] - 0.55 * span, mid[1] - 0.55 * span],
            scale: (PANEL - 2.0 * PAD) / (1.1 * span),
            x0,
        }
    }

    fn map(&self, p: C64) -> (f64, f64) {
        (
            self.x0 + PAD + (p.re - self.lo[0]) * self.scale,
            PANEL - PAD - (p.im - self.lo[1]) * self.scale,
        )
    }
}

fn polyline(svg: &mut String, frame: &Frame, points: &[C64], color: &str, width: f64) {
    let pts: Vec<String> = points
        .iter()
        .filter(|p| p.re.is_finite() && p.im.is_finite())
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
        pts.join(" ")
    );
}

/// One panel per component: images of the circles `|l| = r` and the
/// boundary data at the grid nodes.
pub fn candidate(cand: &GeodesicCandidate) -> String {
    let n = cand.rep.n();
    let circle = |r: f64| -> Vec<C64> {
        (0..=256)
            .map(|k| C64::from_polar(r, std::f64::consts::TAU * k as f64 / 256.0))
            .collect()
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
        PANEL * n as f64,
        PANEL
    );
    for j in 0..n {
        let curves: Vec<Vec<C64>> = RADII
            .iter()
            .map(|&r| circle(r).iter().map(|&l| cand.eval(l)[j]).collect())
            .collect();
        let mut boundary = cand.boundary.component(j).to_vec();
        boundary.push(boundary[0]);
        let frame = Frame::fit(
            curves.iter().flatten().chain(&boundary).copied(),
            PANEL * j as f64,
        );
        let _ = writeln!(
            svg,
            r##"<rect x="{}" y="0" width="{PANEL}" height="{PANEL}" fill="white" stroke="#999"/>"##,
            PANEL * j as f64
        );
        polyline(&mut svg, &frame, &boundary, "#d94801", 1.0);
        for (curve, color) in curves.iter().zip(COLORS) {
            polyline(&mut svg, &frame, curve, color, 1.5);
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="16">phi_{}</text>"#,
            PANEL * j as f64 + 8.0,
            j + 1
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Occupied pixels as one rectangle per horizontal run.
pub fn raster(r: &SectionRaster) -> String {
    let m = r.resolution();
    let px = (512.0 / m as f64).max(1.0);
    let size = px * m as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{size}" height="{size}" fill="white" stroke="#999"/>"##
    );
    for j in 0..m {
        let y = (m - 1 - j) as f64 * px;
        let mut i = 0;
        while i < m {
            if !r.get(i, j) {
                i += 1;
                continue;
            }
            let start = i;
            while i < m && r.get(i, j) {
                i += 1;
            }
            let _ = writeln!(
                svg,
                r##"<rect x="{}" y="{y}" width="{}" height="{px}" fill="#2171b5"/>"##,
                start as f64 * px,
                (i - start) as f64 * px
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}
