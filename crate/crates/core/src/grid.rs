//! Uniform 1D grids, quadrature and derivative stencils.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::FieldError;

/// Uniform grid `x_j = x_min + j * dx`, `j = 0..n_points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self, FieldError> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(FieldError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < Self::MIN_POINTS {
            return Err(FieldError::InvalidGrid(format!(
                "n_points must be >= {}, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Grid symmetric about the origin.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self, FieldError> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n_points).map(|j| self.x_min + j as f64 * dx).collect()
    }

    /// Period used by spectral operators (`n * dx`).
    pub fn period(&self) -> f64 {
        self.n_points as f64 * self.dx()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Cell index `j` with `x_j <= x < x_{j+1}` and the fractional offset in the cell.
    /// Returns `None` outside the grid.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !self.contains(x) {
            return None;
        }
        let s = (x - self.x_min) / self.dx();
        let j = (s.floor() as usize).min(self.n_points - 2);
        Some((j, s - j as f64))
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = 2.0 * std::f64::consts::PI / self.period();
        (0..n)
            .map(|j| {
                let m = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
                m * dk
            })
            .collect()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<(), FieldError> {
        if len != self.n_points {
            return Err(FieldError::LengthMismatch { expected: self.n_points, found: len });
        }
        Ok(())
    }
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dx * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Forward/inverse FFT pair bound to a grid, with the matching wavenumbers.
#[derive(Clone)]
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.k.len()).finish()
    }
}

impl Spectral {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n_points();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k: grid.wavenumbers(),
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Inverse transform in place, including the `1/n` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / data.len() as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    /// Multiply by `symbol(k)` in Fourier space.
    pub fn apply_symbol(&self, values: &[Complex64], symbol: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        for (z, &k) in buf.iter_mut().zip(&self.k) {
            *z *= symbol(k);
        }
        self.inverse(&mut buf);
        buf
    }
}

/// Differentiation scheme used for field diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Fourth-order central differences, lower order in the two outermost cells.
    #[default]
    FiniteDifference4,
    /// Fourier differentiation; assumes the field is negligible at the edges.
    Spectral,
}

/// Derivative operators for one grid and stencil.
#[derive(Debug, Clone)]
pub struct Derivatives {
    grid: GridSpec,
    spectral: Option<Spectral>,
}

impl Derivatives {
    pub fn new(grid: &GridSpec, stencil: Stencil) -> Self {
        let spectral = match stencil {
            Stencil::FiniteDifference4 => None,
            Stencil::Spectral => Some(Spectral::new(grid)),
        };
        Self { grid: *grid, spectral }
    }

    pub fn stencil(&self) -> Stencil {
        if self.spectral.is_some() {
            Stencil::Spectral
        } else {
            Stencil::FiniteDifference4
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn first(&self, f: &[Complex64]) -> Vec<Complex64> {
        match &self.spectral {
            Some(sp) => sp.apply_symbol(f, |k| Complex64::new(0.0, k)),
            None => fd4_first(f, self.grid.dx()),
        }
    }

    pub fn second(&self, f: &[Complex64]) -> Vec<Complex64> {
        match &self.spectral {
            Some(sp) => sp.apply_symbol(f, |k| Complex64::new(-k * k, 0.0)),
            None => fd4_second(f, self.grid.dx()),
        }
    }

    pub fn first_real(&self, f: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.first(&z).into_iter().map(|c| c.re).collect()
    }

    pub fn second_real(&self, f: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.second(&z).into_iter().map(|c| c.re).collect()
    }
}

/// Generic over anything that forms a vector space over f64.
pub(crate) fn fd4_first<T>(f: &[T], dx: f64) -> Vec<T>
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = f.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let d = if j >= 2 && j + 2 < n {
            ((f[j + 1] - f[j - 1]) * 8.0 - (f[j + 2] - f[j - 2])) * (1.0 / (12.0 * dx))
        } else if j >= 1 && j + 1 < n {
            (f[j + 1] - f[j - 1]) * (0.5 / dx)
        } else if j == 0 {
            (f[1] * 4.0 - f[0] * 3.0 - f[2]) * (0.5 / dx)
        } else {
            (f[j] * 3.0 - f[j - 1] * 4.0 + f[j - 2]) * (0.5 / dx)
        };
        out.push(d);
    }
    out
}

fn fd4_second<T>(f: &[T], dx: f64) -> Vec<T>
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = f.len();
    let h2 = dx * dx;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let d = if j >= 2 && j + 2 < n {
            ((f[j + 1] + f[j - 1]) * 16.0 - f[j] * 30.0 - (f[j + 2] + f[j - 2])) * (1.0 / (12.0 * h2))
        } else if j >= 1 && j + 1 < n {
            (f[j + 1] + f[j - 1] - f[j] * 2.0) * (1.0 / h2)
        } else if j == 0 {
            (f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) * (1.0 / h2)
        } else {
            (f[j] * 2.0 - f[j - 1] * 5.0 + f[j - 2] * 4.0 - f[j - 3]) * (1.0 / h2)
        };
        out.push(d);
    }
    out
}

/// Weights of the 4-point Lagrange interpolant through nodes at offsets -1, 0, 1, 2,
/// evaluated at fractional offset `s` in `[0, 1]`.
#[inline]
pub fn cubic_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

/// Lagrange weights for arbitrary distinct nodes.
pub fn lagrange_weights<const N: usize>(nodes: &[f64; N], x: f64) -> [f64; N] {
    let mut w = [1.0; N];
    for i in 0..N {
        for m in 0..N {
            if m != i {
                w[i] *= (x - nodes[m]) / (nodes[i] - nodes[m]);
            }
        }
    }
    w
}
