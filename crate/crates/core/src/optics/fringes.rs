use num_complex::Complex64;

use super::KxProfile;
use crate::grid::GridSpec;

/// Indices of strict local maxima and minima.
pub fn extrema(values: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for j in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[j - 1], values[j], values[j + 1]);
        if b > a && b > c {
            maxima.push(j);
        } else if b < a && b < c {
            minima.push(j);
        }
    }
    (maxima, minima)
}

/// Sub-cell position of an extremum at `j` from the parabola through three samples.
fn refine(grid: &GridSpec, f: &[f64], j: usize) -> f64 {
    let (a, b, c) = (f[j - 1], f[j], f[j + 1]);
    let den = a - 2.0 * b + c;
    let shift = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    grid.x(j) + shift * grid.dx()
}

/// Distance between the intensity minima on either side of `x_ref`.
pub fn fringe_spacing_from_minima(grid: &GridSpec, intensity: &[f64], x_ref: f64) -> Option<f64> {
    let (_, minima) = extrema(intensity);
    let left = minima.iter().rev().find(|&&j| grid.x(j) < x_ref)?;
    let right = minima.iter().find(|&&j| grid.x(j) > x_ref)?;
    Some(refine(grid, intensity, *right) - refine(grid, intensity, *left))
}

/// Local period `2π/|∂x arg(a b*)|` of the interference term between two
/// separately propagated fields, at the grid point nearest `x`.
pub fn cross_term_spacing(grid: &GridSpec, a: &[Complex64], b: &[Complex64], x: f64) -> Option<f64> {
    let (j, s) = grid.locate(x)?;
    let j = if s > 0.5 { j + 1 } else { j };
    if j == 0 || j + 1 >= grid.n_points() {
        return None;
    }
    let w = |m: usize| a[m] * b[m].conj();
    let dphi = (w(j + 1) * w(j - 1).conj()).arg() / (2.0 * grid.dx());
    (dphi != 0.0).then(|| 2.0 * std::f64::consts::PI / dphi.abs())
}

/// `max − min` of `k_x/k` over points where `U > rel · max U`.
pub fn peak_to_peak(profile: &KxProfile, u: &[f64], rel: f64) -> Option<f64> {
    let umax = u.iter().cloned().fold(0.0, f64::max);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..u.len() {
        if profile.valid[j] && u[j] > rel * umax {
            lo = lo.min(profile.values[j]);
            hi = hi.max(profile.values[j]);
        }
    }
    (hi >= lo).then_some(hi - lo)
}
