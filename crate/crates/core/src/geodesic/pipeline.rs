use serde::{Deserialize, Serialize};

use crate::circle::{Atom, BoundarySignal, CircleGrid, HoloRep};
use crate::domains::DomainDescriptor;
use crate::hclass::{symbol_of, HParams, HPoly};
use crate::{Error, Mixed, Result, C64};

/// A reconstructed map `phi` together with the data it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCandidate {
    pub rep: HoloRep,
    pub domain: DomainDescriptor,
    pub h: HParams,
    /// Boundary values `(phi*_head, Re phi*_tail)` as a complex signal.
    pub boundary: BoundarySignal,
}

impl GeodesicCandidate {
    pub fn grid(&self) -> CircleGrid {
        self.boundary.grid()
    }

    pub fn eval(&self, lambda: C64) -> Vec<C64> {
        self.rep.eval(lambda)
    }

    pub fn center(&self) -> Vec<C64> {
        self.rep.eval(C64::new(0.0, 0.0))
    }
}

/// Nodes closest to each atom. Their support data are replaced by the mean of
/// their neighbours, since `h` typically vanishes there.
pub fn exempt_nodes(grid: CircleGrid, atoms: &[Atom]) -> Vec<usize> {
    let mut out: Vec<usize> = atoms.iter().map(|a| grid.nearest_node(a.theta())).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_shapes(domain: &DomainDescriptor, h: &HParams) -> Result<()> {
    if (domain.n(), domain.d()) != (h.n, h.d) {
        return Err(Error::Argument(format!(
            "h has (n, d) = ({}, {}), domain has ({}, {})",
            h.n,
            h.d,
            domain.n(),
            domain.d()
        )));
    }
    Ok(())
}

/// Support points `P_D(conj(l) h(l))` at every node.
pub fn boundary_data_from_h(
    domain: &DomainDescriptor,
    h: &HParams,
    grid: CircleGrid,
    atoms: &[Atom],
) -> Result<BoundarySignal> {
    check_shapes(domain, h)?;
    let poly = h.polynomial()?;
    let exempt = exempt_nodes(grid, atoms);
    boundary_data_with(domain, &poly, grid, &exempt)
}

pub(crate) fn boundary_data_with(
    domain: &DomainDescriptor,
    poly: &HPoly,
    grid: CircleGrid,
    exempt: &[usize],
) -> Result<BoundarySignal> {
    let n = domain.n();
    let d = domain.d();
    let size = grid.size();
    let mut points: Vec<Option<Mixed>> = vec![None; size];
    for (k, slot) in points.iter_mut().enumerate() {
        if exempt.binary_search(&k).is_ok() {
            continue;
        }
        let v = symbol_of(poly, d, grid.node(k))?;
        if v.is_zero() {
            return Err(Error::EmptySupport {
                node: k,
                theta: grid.angle(k),
            });
        }
        match domain.support_point(&v)? {
            Some(sp) => *slot = Some(sp.point),
            None => {
                return Err(Error::EmptySupport {
                    node: k,
                    theta: grid.angle(k),
                })
            }
        }
    }
    let mut values = vec![vec![C64::new(0.0, 0.0); size]; n];
    for k in 0..size {
        let z = match &points[k] {
            Some(p) => p.to_complex(),
            None => {
                let near: Vec<Vec<C64>> = [k + size - 1, k + 1]
                    .iter()
                    .filter_map(|&i| points[i % size].as_ref().map(Mixed::to_complex))
                    .collect();
                if near.is_empty() {
                    return Err(Error::EmptySupport {
                        node: k,
                        theta: grid.angle(k),
                    });
                }
                (0..n)
                    .map(|j| near.iter().map(|p| p[j]).sum::<C64>() / near.len() as f64)
                    .collect()
            }
        };
        for (col, x) in values.iter_mut().zip(z) {
            col[k] = x;
        }
    }
    BoundarySignal::new(grid, values)
}

/// `max |symbol(h, l0)_tail . rho|` over atoms; zero without atoms.
pub fn atom_compatibility(h: &HParams, atoms: &[Atom]) -> Result<f64> {
    let poly = h.polynomial()?;
    atoms.iter().try_fold(0.0f64, |acc, a| {
        let s = symbol_of(&poly, h.d, a.point())?;
        if a.rho().len() != h.d {
            return Err(Error::Argument(
                "atom direction must have d coordinates".into(),
            ));
        }
        let r: f64 = s.tail.iter().zip(a.rho()).map(|(x, y)| x * y).sum();
        Ok(acc.max(r.abs()))
    })
}

pub(crate) fn check_atom_cones(domain: &DomainDescriptor, atoms: &[Atom]) -> Result<()> {
    for a in atoms {
        if a.rho().len() != domain.d() {
            return Err(Error::Argument(format!(
                "atom direction has {} coordinates, expected d = {}",
                a.rho().len(),
                domain.d()
            )));
        }
        if a.alpha() > 0.0 && !domain.in_sd(a.rho()) {
            return Err(Error::Cone(a.rho().to_vec()));
        }
    }
    Ok(())
}

/// Builds `phi` from `h`: head components from the nonnegative Fourier
/// coefficients of the support data, tail components as the Schwarz integral
/// of their real boundary density plus atoms plus `i imconst`.
pub fn reconstruct(
    domain: &DomainDescriptor,
    h: &HParams,
    grid: CircleGrid,
    atoms: &[Atom],
    imconst: &[f64],
) -> Result<GeodesicCandidate> {
    check_shapes(domain, h)?;
    check_atom_cones(domain, atoms)?;
    if imconst.len() != domain.d() {
        return Err(Error::Argument(format!(
            "imconst has {} entries, expected d = {}",
            imconst.len(),
            domain.d()
        )));
    }
    let boundary = boundary_data_from_h(domain, h, grid, atoms)?;
    let rep = rep_from_boundary(&boundary, domain.d(), atoms.to_vec(), imconst.to_vec())?;
    Ok(GeodesicCandidate {
        rep,
        domain: domain.clone(),
        h: h.clone(),
        boundary,
    })
}

pub(crate) fn rep_from_boundary(
    boundary: &BoundarySignal,
    d: usize,
    atoms: Vec<Atom>,
    imconst: Vec<f64>,
) -> Result<HoloRep> {
    let n = boundary.components();
    let max = boundary.grid().max_degree();
    let table = boundary.coefficients();
    let mut taylor: Vec<Vec<C64>> = (0..n - d).map(|j| table.analytic_part(j, max)).collect();
    let real_tail: Vec<Vec<C64>> = boundary.values()[n - d..]
        .iter()
        .map(|col| col.iter().map(|x| C64::new(x.re, 0.0)).collect())
        .collect();
    let tail = BoundarySignal::new(boundary.grid(), real_tail)?;
    for j in 0..d {
        // Schwarz series of a real density: g_0, 2 g_1, 2 g_2, ...
        let g = tail.coefficients().analytic_part(j, max);
        let mut s = Vec::with_capacity(g.len());
        s.push(C64::new(g[0].re, 0.0));
        s.extend(g[1..].iter().map(|x| x * 2.0));
        taylor.push(s);
    }
    HoloRep::new(d, taylor, atoms, imconst)
}
