use rayon::prelude::*;

use super::{PoyntingField, SlitSpec, C_LIGHT};
use crate::error::OpticsError;
use crate::grid::cubic_weights;
use crate::table::Table;
use crate::trajectory::Cdf;

/// `|S|/(cU)` below which the flow direction is considered undefined.
pub const STAGNATION_THRESHOLD: f64 = 1e-6;

/// Energy streamline sampled at arc length `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonPath {
    /// `(s, x, z)`
    pub samples: Vec<(f64, f64, f64)>,
}

impl PhotonPath {
    pub fn start(&self) -> (f64, f64) {
        let (_, x, z) = self.samples[0];
        (x, z)
    }

    pub fn end(&self) -> (f64, f64) {
        let (_, x, z) = self.samples[self.samples.len() - 1];
        (x, z)
    }

    /// Proper time `τ = s/c` of sample `i`.
    pub fn proper_time(&self, i: usize) -> f64 {
        self.samples[i].0 / C_LIGHT
    }

    /// `x` where the path crosses `z`, linear between samples.
    pub fn x_at(&self, z: f64) -> Option<f64> {
        let k = self.samples.windows(2).position(|w| (w[0].2 <= z && z <= w[1].2) || (w[1].2 <= z && z <= w[0].2))?;
        let (a, b) = (self.samples[k], self.samples[k + 1]);
        if a.2 == b.2 {
            return Some(a.1);
        }
        Some(a.1 + (b.1 - a.1) * (z - a.2) / (b.2 - a.2))
    }
}

fn lagrange(nodes: &[f64], x: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            (0..nodes.len()).filter(|&m| m != i).map(|m| (x - nodes[m]) / (nodes[i] - nodes[m])).product()
        })
        .collect()
}

struct Sample {
    sx: f64,
    sz: f64,
    u: f64,
}

/// Tensor-product 4-point Lagrange interpolation of `(S_x, S_z, U)`.
fn interpolate(f: &PoyntingField, x: f64, z: f64) -> Result<Sample, OpticsError> {
    let planes = &f.z_planes;
    let zmin = planes[0];
    let zmax = planes[planes.len() - 1];
    let tol = 1e-12 * zmax.abs().max(1.0);
    if !(z >= zmin - tol && z <= zmax + tol) {
        return Err(OpticsError::LeftDomain { x, z });
    }
    let (j, s) = f.grid.locate(x).ok_or(OpticsError::LeftDomain { x, z })?;
    let n = f.grid.n_points();
    let (xs, xw): (Vec<usize>, Vec<f64>) = if j >= 1 && j + 2 < n {
        ((j - 1..=j + 2).collect(), cubic_weights(s).to_vec())
    } else {
        (vec![j, j + 1], vec![1.0 - s, s])
    };
    let m = planes.len();
    let (zs, zw): (Vec<usize>, Vec<f64>) = if m == 1 {
        (vec![0], vec![1.0])
    } else {
        let p = planes.partition_point(|&q| q <= z).clamp(1, m - 1) - 1;
        let width = m.min(4);
        let lo = p.saturating_sub(1).min(m - width);
        let idx: Vec<usize> = (lo..lo + width).collect();
        let nodes: Vec<f64> = idx.iter().map(|&i| planes[i]).collect();
        let w = lagrange(&nodes, z);
        (idx, w)
    };
    let mut out = Sample { sx: 0.0, sz: 0.0, u: 0.0 };
    for (a, &pa) in zs.iter().enumerate() {
        for (b, &jb) in xs.iter().enumerate() {
            let w = zw[a] * xw[b];
            out.sx += w * f.sx[pa][jb];
            out.sz += w * f.sz[pa][jb];
            out.u += w * f.u[pa][jb];
        }
    }
    Ok(out)
}

fn flow(f: &PoyntingField, x: f64, z: f64, umax: f64) -> Result<(f64, f64, Sample), OpticsError> {
    let s = interpolate(f, x, z)?;
    if !(s.u > 1e-12 * umax) || s.sx.hypot(s.sz) < STAGNATION_THRESHOLD * C_LIGHT * s.u {
        return Err(OpticsError::StagnationPoint { x, z });
    }
    Ok((s.sx / (C_LIGHT * s.u), s.sz / (C_LIGHT * s.u), s))
}

/// RK4 integration of `dr/ds = S/(cU)` from `(x0, z0)` to the last lattice plane.
/// The final step is taken in `z` (`dx/dz = S_x/S_z`) so the path ends on the plane.
pub fn photon_path(x0: f64, z0: f64, fields: &PoyntingField, ds: f64) -> Result<PhotonPath, OpticsError> {
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(OpticsError::InvalidScene(format!("arc-length step must be > 0, got {ds}")));
    }
    let umax = fields.u.iter().flatten().cloned().fold(0.0, f64::max);
    let z_end = fields.z_planes[fields.z_planes.len() - 1];
    flow(fields, x0, z0, umax)?;
    let (mut s, mut x, mut z) = (0.0, x0, z0);
    let mut samples = vec![(s, x, z)];
    while z_end - z > 1e-12 * z_end {
        if z + 1.01 * ds < z_end {
            let (a1, b1, _) = flow(fields, x, z, umax)?;
            let (a2, b2, _) = flow(fields, x + 0.5 * ds * a1, z + 0.5 * ds * b1, umax)?;
            let (a3, b3, _) = flow(fields, x + 0.5 * ds * a2, z + 0.5 * ds * b2, umax)?;
            let (a4, b4, _) = flow(fields, x + ds * a3, z + ds * b3, umax)?;
            x += ds / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            z += ds / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            s += ds;
            if b1 <= 0.0 && z <= samples[samples.len() - 1].2 {
                return Err(OpticsError::StagnationPoint { x, z });
            }
        } else {
            let h = z_end - z;
            let g = |x: f64, z: f64| -> Result<(f64, f64), OpticsError> {
                let (_, _, smp) = flow(fields, x, z, umax)?;
                if smp.sz <= 0.0 {
                    return Err(OpticsError::StagnationPoint { x, z });
                }
                Ok((smp.sx / smp.sz, C_LIGHT * smp.u / smp.sz))
            };
            let (a1, l1) = g(x, z)?;
            let (a2, l2) = g(x + 0.5 * h * a1, z + 0.5 * h)?;
            let (a3, l3) = g(x + 0.5 * h * a2, z + 0.5 * h)?;
            let (a4, l4) = g(x + h * a3, z_end)?;
            x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            s += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
            z = z_end;
        }
        if !fields.grid.contains(x) {
            return Err(OpticsError::LeftDomain { x, z });
        }
        samples.push((s, x, z));
    }
    Ok(PhotonPath { samples })
}

/// Trace paths from every start on plane `z0`, in parallel.
pub fn trace_paths(starts: &[f64], z0: f64, fields: &PoyntingField, ds: f64) -> Vec<Result<PhotonPath, OpticsError>> {
    starts.par_iter().map(|&x| photon_path(x, z0, fields, ds)).collect()
}

/// Quantile launch points on the first plane: `n_per_slit` points per slit at
/// the `(i − ½)/n` quantiles of `U` restricted to the slit's region (bounded
/// by midpoints between neighbouring slit centres). Returns positions in
/// increasing order with the energy fraction carried by each.
pub fn launch_positions(
    fields: &PoyntingField,
    slits: &[SlitSpec],
    n_per_slit: usize,
) -> Result<(Vec<f64>, Vec<f64>), OpticsError> {
    if slits.is_empty() {
        return Err(OpticsError::EmptyScene);
    }
    let cdf = Cdf::new(&fields.grid, &fields.u[0])?;
    let mut centers: Vec<f64> = slits.iter().map(|s| s.center).collect();
    centers.sort_by(f64::total_cmp);
    let mut bounds = vec![fields.grid.x_min()];
    bounds.extend(centers.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    bounds.push(fields.grid.x_max());
    let total = cdf.total();
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for w in bounds.windows(2) {
        let (fa, fb) = (cdf.mass_below(w[0]), cdf.mass_below(w[1]));
        for i in 1..=n_per_slit {
            let q = (fa + (i as f64 - 0.5) / n_per_slit as f64 * (fb - fa)) / total;
            xs.push(cdf.quantile(q));
            ws.push((fb - fa) / total / n_per_slit as f64);
        }
    }
    Ok((xs, ws))
}

/// Intensity minima of `U` on either side of `x_mid` at the last plane.
pub fn central_fringe_window(fields: &PoyntingField, x_mid: f64) -> Option<(f64, f64)> {
    let u = &fields.u[fields.u.len() - 1];
    let (_, minima) = super::extrema(u);
    let g = &fields.grid;
    let left = minima.iter().rev().find(|&&j| g.x(j) < x_mid)?;
    let right = minima.iter().find(|&&j| g.x(j) > x_mid)?;
    Some((g.x(*left), g.x(*right)))
}

/// Summed weight of paths whose endpoint lies in `[a, b]`.
pub fn path_fraction_in(paths: &[PhotonPath], weights: &[f64], window: (f64, f64)) -> f64 {
    paths
        .iter()
        .zip(weights)
        .filter(|(p, _)| {
            let x = p.end().0;
            x >= window.0 && x <= window.1
        })
        .map(|(_, w)| w)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathOrderingReport {
    pub ok: bool,
    pub min_gap: Option<f64>,
    /// `(z, i)` where path `i` first failed to stay left of path `i + 1`.
    pub first_violation: Option<(f64, usize)>,
}

/// Check that paths, ordered by launch position, stay ordered at every plane.
pub fn check_path_ordering(paths: &[PhotonPath], planes: &[f64]) -> PathOrderingReport {
    if paths.len() < 2 {
        return PathOrderingReport { ok: true, min_gap: None, first_violation: None };
    }
    let mut min_gap = f64::INFINITY;
    let mut first_violation = None;
    for &z in planes {
        let xs: Vec<Option<f64>> = paths.iter().map(|p| p.x_at(z)).collect();
        for i in 0..xs.len() - 1 {
            if let (Some(a), Some(b)) = (xs[i], xs[i + 1]) {
                min_gap = min_gap.min(b - a);
                if b <= a && first_violation.is_none() {
                    first_violation = Some((z, i));
                }
            }
        }
    }
    PathOrderingReport {
        ok: first_violation.is_none(),
        min_gap: min_gap.is_finite().then_some(min_gap),
        first_violation,
    }
}

/// Long-format table `path s x z`.
pub fn write_paths(paths: &[PhotonPath], extra: &[(&str, String)]) -> String {
    let mut t = Table::new();
    t.meta("paths", paths.len());
    for (k, v) in extra {
        t.meta(k, v);
    }
    t.columns(&["path", "s", "x", "z"]);
    for (i, p) in paths.iter().enumerate() {
        for &(s, x, z) in &p.samples {
            t.row([(i + 1) as f64, s, x, z]);
        }
    }
    t.into_string()
}
