use std::cell::RefCell;
use std::fmt::Write as _;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{Atom, CircleGrid};
use crate::{Error, Result, C64};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// `c_k = (1/N) sum_j v_j exp(-2 pi i j k / N)`, in FFT bin order.
pub(crate) fn forward_dft(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    let mut buf = values.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward_dft`].
pub(crate) fn inverse_dft(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    let mut buf = coeffs.to_vec();
    fft.process(&mut buf);
    buf
}

/// Bin index of a signed frequency in `-N/2 .. N/2 - 1`.
fn bin(size: usize, freq: i64) -> usize {
    freq.rem_euclid(size as i64) as usize
}

/// Two-sided Fourier coefficients per component, frequencies `-N/2 .. N/2 - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    size: usize,
    bins: Vec<Vec<C64>>,
}

impl CoefficientTable {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn components(&self) -> usize {
        self.bins.len()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = i64> {
        let h = (self.size / 2) as i64;
        -h..h
    }

    pub fn get(&self, component: usize, freq: i64) -> C64 {
        self.bins[component][bin(self.size, freq)]
    }

    /// Coefficients of one component in FFT bin order.
    pub fn component(&self, component: usize) -> &[C64] {
        &self.bins[component]
    }

    /// Nonnegative-frequency coefficients `0 ..= max_degree`.
    pub fn analytic_part(&self, component: usize, max_degree: usize) -> Vec<C64> {
        self.bins[component][..=max_degree.min(self.size / 2 - 1)].to_vec()
    }

    pub fn inverse(&self) -> Vec<Vec<C64>> {
        self.bins.iter().map(|b| inverse_dft(b)).collect()
    }
}

/// Samples of a `C^n`-valued function on the circle grid together with their
/// Fourier table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SignalRecord", try_from = "SignalRecord")]
pub struct BoundarySignal {
    grid: CircleGrid,
    values: Vec<Vec<C64>>,
    coeffs: CoefficientTable,
}

impl BoundarySignal {
    /// `values[j][k]` is component `j` at node `k`.
    pub fn new(grid: CircleGrid, values: Vec<Vec<C64>>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|v| v.len() != grid.size()) {
            return Err(Error::Argument(format!(
                "component {bad} has {} samples, grid has {}",
                values[bad].len(),
                grid.size()
            )));
        }
        let bins = values.iter().map(|v| forward_dft(v)).collect();
        let coeffs = CoefficientTable {
            size: grid.size(),
            bins,
        };
        Ok(BoundarySignal {
            grid,
            values,
            coeffs,
        })
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(C64) -> Vec<C64>>(
        grid: CircleGrid,
        components: usize,
        f: F,
    ) -> Result<Self> {
        let mut values = vec![Vec::with_capacity(grid.size()); components];
        for lambda in grid.nodes() {
            let v = f(lambda);
            if v.len() != components {
                return Err(Error::Argument(format!(
                    "sampler returned {} components, expected {components}",
                    v.len()
                )));
            }
            for (col, x) in values.iter_mut().zip(v) {
                col.push(x);
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    pub fn component(&self, j: usize) -> &[C64] {
        &self.values[j]
    }

    pub fn coefficients(&self) -> &CoefficientTable {
        &self.coeffs
    }

    /// Trigonometric interpolant of component `j` at angle `theta`. The
    /// Nyquist mode is split symmetrically so real data interpolate to real
    /// values.
    pub fn interpolate(&self, j: usize, theta: f64) -> C64 {
        let n = self.grid.size();
        let h = (n / 2) as i64;
        let mut acc = C64::new(0.0, 0.0);
        for f in (-h + 1)..h {
            acc += self.coeffs.get(j, f) * C64::from_polar(1.0, f as f64 * theta);
        }
        acc + self.coeffs.get(j, -h) * (h as f64 * theta).cos()
    }

    /// CSV with columns `k, theta, c0_re, c0_im, c1_re, ...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,theta");
        for j in 0..self.components() {
            let _ = write!(out, ",c{j}_re,c{j}_im");
        }
        out.push('\n');
        for k in 0..self.grid.size() {
            let _ = write!(out, "{k},{:.17e}", self.grid.angle(k));
            for col in &self.values {
                let _ = write!(out, ",{:.17e},{:.17e}", col[k].re, col[k].im);
            }
            out.push('\n');
        }
        out
    }
}

/// JSON interchange record shared by signals and measures.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignalRecord {
    #[serde(rename = "N")]
    pub size: usize,
    pub values: Vec<Vec<C64>>,
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

impl From<BoundarySignal> for SignalRecord {
    fn from(s: BoundarySignal) -> Self {
        SignalRecord {
            size: s.grid.size(),
            values: s.values,
            atoms: Vec::new(),
            d: None,
        }
    }
}

impl TryFrom<SignalRecord> for BoundarySignal {
    type Error = Error;
    fn try_from(r: SignalRecord) -> Result<Self> {
        if !r.atoms.is_empty() {
            return Err(Error::Argument("a boundary signal carries no atoms".into()));
        }
        BoundarySignal::new(CircleGrid::new(r.size)?, r.values)
    }
}

/// Two-sided coefficient table of a signal.
pub fn fourier_coefficients(signal: &BoundarySignal) -> CoefficientTable {
    signal.coeffs.clone()
}

/// Fraction of spectral energy at negative frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardyResidual {
    pub value: f64,
    /// Set when the component has zero energy (the residual is then 0).
    pub degenerate: bool,
}

/// Energy at frequencies `< 0` over total energy; vanishes for boundary values
/// of holomorphic functions.
pub fn hardy_residual(signal: &BoundarySignal, component: usize) -> Result<HardyResidual> {
    if component >= signal.components() {
        return Err(Error::Argument(format!(
            "component {component} out of range for a {}-component signal",
            signal.components()
        )));
    }
    let table = &signal.coeffs;
    let mut negative = 0.0;
    let mut total = 0.0;
    for f in table.frequencies() {
        let e = table.get(component, f).norm_sqr();
        total += e;
        if f < 0 {
            negative += e;
        }
    }
    if total == 0.0 {
        return Ok(HardyResidual {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(HardyResidual {
        value: negative / total,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> CircleGrid {
        CircleGrid::new(64).unwrap()
    }

    fn one(f: impl Fn(C64) -> C64) -> BoundarySignal {
        BoundarySignal::sample(grid(), 1, |l| vec![f(l)]).unwrap()
    }

    fn assert_only(table: &CoefficientTable, freq: i64, value: C64) {
        for f in table.frequencies() {
            let expected = if f == freq { value } else { C64::new(0.0, 0.0) };
            assert!((table.get(0, f) - expected).norm() < 1e-14, "freq {f}");
        }
    }

    #[test]
    fn constant_signal_has_only_the_mean() {
        let c = C64::new(2.5, -1.0);
        assert_only(&fourier_coefficients(&one(|_| c)), 0, c);
    }

    #[test]
    fn identity_and_conjugate_are_pure_modes() {
        assert_only(&fourier_coefficients(&one(|l| l)), 1, C64::new(1.0, 0.0));
        assert_only(
            &fourier_coefficients(&one(|l| l.conj())),
            -1,
            C64::new(1.0, 0.0),
        );
    }

    #[test]
    fn inverse_reproduces_values() {
        let s = one(|l| (l * 3.0).exp() + l.conj().powi(5));
        let back = s.coefficients().inverse();
        for (a, b) in back[0].iter().zip(s.component(0)) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn hardy_residual_fixtures() {
        let r = hardy_residual(&one(|l| l * l), 0).unwrap();
        assert!(r.value < 1e-28 && !r.degenerate);
        let r = hardy_residual(&one(|l| l.conj()), 0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        // Parseval: |1|^2 at +1 and |1|^2 at -1.
        let r = hardy_residual(&one(|l| l + l.conj()), 0).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let r = hardy_residual(&one(|_| C64::new(0.0, 0.0)), 0).unwrap();
        assert_eq!(
            r,
            HardyResidual {
                value: 0.0,
                degenerate: true
            }
        );
        assert!(hardy_residual(&one(|l| l), 1).is_err());
    }

    #[test]
    fn interpolation_hits_nodes_and_bandlimited_midpoints() {
        let s = one(|l| l.powi(3) + 2.0 * l.conj());
        let g = grid();
        for k in 0..g.size() {
            assert!((s.interpolate(0, g.angle(k)) - s.component(0)[k]).norm() < 1e-13);
        }
        let theta = 0.123;
        let l = C64::from_polar(1.0, theta);
        assert!((s.interpolate(0, theta) - (l.powi(3) + 2.0 * l.conj())).norm() < 1e-13);
    }

    #[test]
    fn json_record_round_trip() {
        let s = one(|l| l);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with("{\"N\":64,\"values\":[[["));
        let back: BoundarySignal = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let csv = one(|l| l).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,theta,c0_re,c0_im"));
        assert_eq!(lines.count(), 64);
    }
}
