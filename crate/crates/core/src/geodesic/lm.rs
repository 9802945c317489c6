//! Damped least squares with a finite-difference Jacobian.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug)]
pub(crate) struct LmConfig {
    pub max_iterations: usize,
    pub fd_step: f64,
    /// Stop once `|r|^2` drops below this.
    pub cost_floor: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct LmResult {
    pub x: Vec<f64>,
    pub iterations: usize,
}

fn sq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Central differences; falls back to a one-sided quotient when the residual
/// is undefined on one side, and to a zero column when it is on both.
fn jacobian<F>(f: &F, x: &[f64], r0: &[f64], step: f64) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let m = r0.len();
    let mut j = DMatrix::zeros(m, x.len());
    let mut xp = x.to_vec();
    for c in 0..x.len() {
        let h = step * x[c].abs().max(1.0);
        xp[c] = x[c] + h;
        let fp = f(&xp).filter(|r| r.len() == m);
        xp[c] = x[c] - h;
        let fm = f(&xp).filter(|r| r.len() == m);
        xp[c] = x[c];
        let col: Option<Vec<f64>> = match (fp, fm) {
            (Some(p), Some(q)) => {
                Some(p.iter().zip(&q).map(|(a, b)| (a - b) / (2.0 * h)).collect())
            }
            (Some(p), None) => Some(p.iter().zip(r0).map(|(a, b)| (a - b) / h).collect()),
            (None, Some(q)) => Some(r0.iter().zip(&q).map(|(a, b)| (a - b) / h).collect()),
            (None, None) => None,
        };
        if let Some(col) = col {
            for (i, v) in col.into_iter().enumerate() {
                j[(i, c)] = v;
            }
        }
    }
    j
}

/// Minimizes `|f(x)|^2`. `f` returns `None` where the model is undefined;
/// such trial points are treated as rejected steps. Returns `None` when `f`
/// is undefined at the starting point.
pub(crate) fn levenberg_marquardt<F>(f: F, x0: Vec<f64>, config: LmConfig) -> Option<LmResult>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let mut x = x0;
    let mut r = f(&x)?;
    let mut cost = sq(&r);
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut stalls = 0;
    while iterations < config.max_iterations && cost > config.cost_floor {
        iterations += 1;
        let j = jacobian(&f, &x, &r, config.fd_step);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * DVector::from_column_slice(&r);
        if g.amax() < 1e-30 {
            break;
        }
        let mut accepted = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += mu * (jtj[(i, i)] + 1e-12);
            }
            let step = match a.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => match a.lu().solve(&(-&g)) {
                    Some(s) => s,
                    None => {
                        mu *= 4.0;
                        continue;
                    }
                },
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            if let Some(rt) = f(&trial).filter(|rt| rt.len() == r.len()) {
                let ct = sq(&rt);
                if ct < cost {
                    stalls = if ct > cost * (1.0 - 1e-10) {
                        stalls + 1
                    } else {
                        0
                    };
                    x = trial;
                    r = rt;
                    cost = ct;
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 4.0;
        }
        if !accepted || stalls >= 5 {
            break;
        }
    }
    Some(LmResult { x, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_rosenbrock() {
        let f = |x: &[f64]| Some(vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]);
        let cfg = LmConfig {
            max_iterations: 200,
            fd_step: 1e-6,
            cost_floor: 1e-24,
        };
        let r = levenberg_marquardt(f, vec![-1.2, 1.0], cfg).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-9 && (r.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn respects_undefined_regions() {
        let f = |x: &[f64]| {
            if x[0] > 0.0 {
                Some(vec![x[0].ln() - 1.0])
            } else {
                None
            }
        };
        let cfg = LmConfig {
            max_iterations: 100,
            fd_step: 1e-6,
            cost_floor: 1e-24,
        };
        let r = levenberg_marquardt(f, vec![0.1], cfg).unwrap();
        assert!((r.x[0] - std::f64::consts::E).abs() < 1e-8);
    }
}
