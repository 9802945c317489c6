use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::certify::{certify, CertificationReport, CertifyConfig, Verdict};
use super::lm::{levenberg_marquardt, LmConfig};
use super::pipeline::{reconstruct, GeodesicCandidate};
use crate::circle::{Atom, CircleGrid};
use crate::domains::DomainDescriptor;
use crate::hclass::{Constrained, HParams, DEFAULT_FREE_DEGREE};
use crate::{Error, Execution, Result, C64};

/// Multi-starts are launched this many at a time.
const START_BATCH: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConnectConfig {
    pub seed: u64,
    pub starts: usize,
    pub max_iterations: usize,
    pub grid_size: usize,
    pub free_degree: usize,
    pub fd_step: f64,
    /// Success needs `|phi(0) - p|^2 + |phi(sigma) - q|^2` at most this.
    pub objective_tol: f64,
    pub certify: CertifyConfig,
    pub execution: Execution,
}

impl Default for ConnectConfig {
    fn default() -> Self {
        ConnectConfig {
            seed: 0,
            starts: 16,
            max_iterations: 200,
            grid_size: 256,
            free_degree: DEFAULT_FREE_DEGREE,
            fd_step: 1e-6,
            objective_tol: 1e-10,
            certify: CertifyConfig::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectStatus {
    Success,
    /// `p = q`: the connecting disc degenerates and `sigma = 0`.
    Degenerate,
    NoConvergence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// No singular part.
    Plain,
    /// One atom, placed where the constrained symbol vanishes.
    Atom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub index: usize,
    pub mode: StartMode,
    pub objective: f64,
    pub iterations: usize,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectOutcome {
    pub status: ConnectStatus,
    pub sigma: f64,
    pub objective: f64,
    /// Index of the reported start, when any start got that far.
    pub start: Option<usize>,
    pub h: Option<HParams>,
    pub candidate: Option<GeodesicCandidate>,
    pub report: Option<CertificationReport>,
    pub starts: Vec<StartSummary>,
}

/// Parameter vector layout:
/// `[head coefficients (re, im)] [tail] [imconst] [atom: theta, w] [sigma logit]`.
#[derive(Clone, Debug)]
struct Layout {
    n: usize,
    d: usize,
    mode: StartMode,
    /// Coefficients per head component.
    head_len: usize,
    /// Tail components use `-|l - d|^2` (domains whose `W_D` forces a
    /// negative last coordinate) instead of the pair form.
    negative_tail: bool,
}

struct Decoded {
    h: HParams,
    atoms: Vec<Atom>,
    imconst: Vec<f64>,
    sigma: f64,
}

impl Layout {
    fn tail_len(&self) -> usize {
        match (self.negative_tail, self.mode) {
            (true, StartMode::Atom) => 0,
            (true, StartMode::Plain) => 2,
            (false, _) => 3,
        }
    }

    fn len(&self) -> usize {
        let atom = if self.mode == StartMode::Atom { 2 } else { 0 };
        2 * self.head_len * (self.n - self.d) + self.tail_len() * self.d + self.d + atom + 1
    }

    fn decode(&self, x: &[f64], generator: &[f64]) -> Result<Decoded> {
        let k = self.n - self.d;
        let (head, rest) = x.split_at(2 * self.head_len * k);
        let (tail, rest) = rest.split_at(self.tail_len() * self.d);
        let (imconst, rest) = rest.split_at(self.d);
        let sigma = 1.0 / (1.0 + (-rest[rest.len() - 1]).exp());
        let mut atoms = Vec::new();
        let mut zero = None;
        if self.mode == StartMode::Atom {
            let (theta, w) = (rest[0], rest[1]);
            let l0 = C64::from_polar(1.0, theta);
            zero = Some(l0);
            atoms.push(Atom::new(theta, w * w, generator.to_vec())?);
        }
        let mut free: Vec<Vec<C64>> = head
            .chunks(2 * self.head_len)
            .map(|c| c.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
            .collect();
        if let Some(l0) = zero {
            // A double zero at the atom keeps the head support data bounded.
            let factor = [l0 * l0, -2.0 * l0, C64::new(1.0, 0.0)];
            free = free
                .iter()
                .map(|q| {
                    let mut out = vec![C64::new(0.0, 0.0); q.len() + 2];
                    for (i, a) in q.iter().enumerate() {
                        for (j, b) in factor.iter().enumerate() {
                            out[i + j] += a * b;
                        }
                    }
                    out
                })
                .collect();
        }
        let constrained = (0..self.d)
            .map(|j| match (self.negative_tail, zero) {
                (true, Some(l0)) => Constrained::positive(-1, 1.0, l0),
                (true, None) => {
                    let (u, v) = (tail[2 * j], tail[2 * j + 1]);
                    let s = (1.0 + u * u + v * v).sqrt();
                    Constrained::positive(-1, 1.0, C64::new(u / s, v / s))
                }
                (false, _) => {
                    let t = &tail[3 * j..3 * j + 3];
                    Constrained::pair(C64::new(t[0], t[1]), t[2])
                }
            })
            .collect();
        let mut h = HParams::new(free, constrained)?;
        if !self.negative_tail {
            let r = h.norm();
            if !(r > 1e-12) {
                return Err(Error::Argument("h vanishes".into()));
            }
            h = h.scaled(1.0 / r);
        }
        Ok(Decoded {
            h,
            atoms,
            imconst: imconst.to_vec(),
            sigma,
        })
    }

    fn initial(&self, rng: &mut ChaCha8Rng, zero_head: bool) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.len())
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        if zero_head {
            x[..2 * self.head_len * (self.n - self.d)]
                .iter_mut()
                .for_each(|v| *v = 0.0);
        }
        if self.mode == StartMode::Atom {
            let at = self.len() - 3;
            x[at] = rng.random_range(0.0..TAU);
        }
        x
    }
}

fn residuals(
    domain: &DomainDescriptor,
    grid: CircleGrid,
    dec: &Decoded,
    p: &[C64],
    q: &[C64],
) -> Result<(Vec<f64>, GeodesicCandidate)> {
    let cand = reconstruct(domain, &dec.h, grid, &dec.atoms, &dec.imconst)?;
    let mut out = Vec::new();
    let ends = [(C64::new(0.0, 0.0), p), (C64::new(dec.sigma, 0.0), q)];
    for (l, target) in ends {
        for (a, b) in cand.eval(l).iter().zip(target) {
            out.push(a.re - b.re);
            out.push(a.im - b.im);
        }
    }
    // Holomorphy penalty: negative frequencies of the head support data.
    let table = cand.boundary.coefficients();
    let half = (grid.size() / 2) as i64;
    for j in 0..domain.n() - domain.d() {
        for f in -half..0 {
            let c = table.get(j, f);
            out.push(c.re);
            out.push(c.im);
        }
    }
    Ok((out, cand))
}

fn endpoint_objective(r: &[f64], n: usize) -> f64 {
    r[..4 * n].iter().map(|x| x * x).sum()
}

/// Searches for a certified geodesic through `p = phi(0)` and `q = phi(sigma)`
/// with `sigma` in `(0, 1)`, by multi-start damped least squares.
pub fn connect(
    domain: &DomainDescriptor,
    p: &[C64],
    q: &[C64],
    config: &ConnectConfig,
) -> Result<ConnectOutcome> {
    let n = domain.n();
    if p.len() != n || q.len() != n {
        return Err(Error::Argument(format!(
            "endpoints must have {n} coordinates"
        )));
    }
    for (name, z) in [("p", p), ("q", q)] {
        if !domain.contains(z).inside {
            return Err(Error::Precondition(format!(
                "{name} is not inside the domain"
            )));
        }
    }
    if config.starts == 0 {
        return Err(Error::Config("connect needs at least one start".into()));
    }
    config.certify.validate()?;
    let grid = CircleGrid::new(config.grid_size)?;
    if p == q {
        return Ok(ConnectOutcome {
            status: ConnectStatus::Degenerate,
            sigma: 0.0,
            objective: 0.0,
            start: None,
            h: None,
            candidate: None,
            report: None,
            starts: Vec::new(),
        });
    }

    let generator = domain.sd_generator();
    let layouts: Vec<Layout> = (0..config.starts)
        .map(|i| {
            let mode = if generator.is_some() && i % 2 == 1 {
                StartMode::Atom
            } else {
                StartMode::Plain
            };
            let head_len = match mode {
                StartMode::Plain => config.free_degree + 1,
                StartMode::Atom => config.free_degree.saturating_sub(1).max(1),
            };
            Layout {
                n,
                d: domain.d(),
                mode,
                head_len,
                negative_tail: generator.is_some(),
            }
        })
        .collect();
    let generator = generator.unwrap_or_default();
    let lm = LmConfig {
        max_iterations: config.max_iterations,
        fd_step: config.fd_step,
        cost_floor: 1e-28,
    };

    let run = |i: usize| {
        let layout = &layouts[i];
        let mut rng =
            ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
        let x0 = layout.initial(&mut rng, i < 2);
        let f = |x: &[f64]| {
            let dec = layout.decode(x, &generator).ok()?;
            residuals(domain, grid, &dec, p, q).ok().map(|(r, _)| r)
        };
        let fit = levenberg_marquardt(f, x0, lm)?;
        let dec = layout.decode(&fit.x, &generator).ok()?;
        let (r, cand) = residuals(domain, grid, &dec, p, q).ok()?;
        let objective = endpoint_objective(&r, n);
        let report = if objective <= config.objective_tol {
            certify(&cand, &dec.h, &config.certify).ok()
        } else {
            None
        };
        Some((fit.iterations, objective, dec, cand, report))
    };

    // Starts run in fixed-size batches; stopping after the first batch with a
    // certified start keeps the choice independent of the thread count.
    let mut runs = Vec::with_capacity(config.starts);
    for batch in (0..config.starts).collect::<Vec<_>>().chunks(START_BATCH) {
        runs.extend(config.execution.map_slice(batch, |&i| run(i)));
        let certified = runs
            .iter()
            .flatten()
            .any(|r| r.4.as_ref().is_some_and(|rep| rep.verdict.is_certified()));
        if certified {
            break;
        }
    }

    let mut starts = Vec::new();
    let mut chosen: Option<usize> = None;
    let mut best: Option<usize> = None;
    for (i, run) in runs.iter().enumerate() {
        let Some((iterations, objective, _, _, report)) = run else {
            starts.push(StartSummary {
                index: i,
                mode: layouts[i].mode,
                objective: f64::INFINITY,
                iterations: 0,
                verdict: None,
            });
            continue;
        };
        let verdict = report.as_ref().map(|r| r.verdict.clone());
        if chosen.is_none() && verdict.as_ref().is_some_and(Verdict::is_certified) {
            chosen = Some(i);
        }
        if best.is_none_or(|b| *objective < runs[b].as_ref().map_or(f64::INFINITY, |r| r.1)) {
            best = Some(i);
        }
        starts.push(StartSummary {
            index: i,
            mode: layouts[i].mode,
            objective: *objective,
            iterations: *iterations,
            verdict,
        });
    }

    let status = if chosen.is_some() {
        ConnectStatus::Success
    } else {
        ConnectStatus::NoConvergence
    };
    let pick = chosen.or(best);
    let mut outcome = ConnectOutcome {
        status,
        sigma: f64::NAN,
        objective: f64::INFINITY,
        start: pick,
        h: None,
        candidate: None,
        report: None,
        starts,
    };
    if let Some(Some((_, objective, dec, cand, report))) = pick.map(|i| &runs[i]) {
        outcome.sigma = dec.sigma;
        outcome.objective = *objective;
        outcome.h = Some(dec.h.normalized());
        outcome.candidate = Some(cand.clone());
        outcome.report = report.clone();
    }
    Ok(outcome)
}
