use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::OpticalScene;
use crate::error::{FieldError, OpticsError};
use crate::fields::{ComplexField, DEFAULT_NODE_THRESHOLD};
use crate::grid::trapezoid;

/// Terms between direct re-evaluations of the kernel phase in the recurrence.
const RESEED: usize = 256;

/// Scalar field on the `(x, z)` lattice together with its analytic `x` and `z`
/// derivatives, indexed `[plane][x]`.
#[derive(Debug, Clone)]
pub struct OpticalField2D {
    pub scene: OpticalScene,
    pub psi: Vec<Vec<Complex64>>,
    pub dpsi_dx: Vec<Vec<Complex64>>,
    pub dpsi_dz: Vec<Vec<Complex64>>,
}

impl OpticalField2D {
    pub fn intensity(&self, plane: usize) -> Vec<f64> {
        self.psi[plane].iter().map(|z| z.norm_sqr()).collect()
    }

    /// `∫|Ψ|² dx` at one plane.
    pub fn norm(&self, plane: usize) -> f64 {
        trapezoid(&self.intensity(plane), self.scene.grid.dx())
    }
}

/// Closed-form Fresnel propagation of a normalized Gaussian slit of width `sigma`
/// centred at `center`, including the carrier `e^{ikz}`.
pub fn gaussian_beam(sigma: f64, center: f64, wavelength: f64, x: f64, z: f64) -> Complex64 {
    let k = 2.0 * PI / wavelength;
    let q = Complex64::new(1.0, z / (2.0 * k * sigma * sigma));
    let d = x - center;
    (2.0 * PI * sigma * sigma).powf(-0.25) * q.powf(-0.5) * (-d * d / (4.0 * sigma * sigma * q)).exp() * Complex64::cis(k * z)
}

struct Sums {
    s0: Complex64,
    s1: Complex64,
    s2: Complex64,
}

/// `Σ ψ0_j e^{ic d_j²} d_j^p` for `p = 0, 1, 2`, `d_j = x − x'_j`, over the
/// contiguous source runs. Successive phases use the exact recurrence
/// `φ_{j+1} − φ_j = c(dx² − 2 d_j dx)`, whose increments differ by `2c dx²`.
fn kernel_sums(x: f64, c: f64, runs: &[(usize, usize)], src: &[Complex64], x_min: f64, dx: f64) -> Sums {
    let step = Complex64::cis(2.0 * c * dx * dx);
    let mut out = Sums { s0: Complex64::default(), s1: Complex64::default(), s2: Complex64::default() };
    for &(a, b) in runs {
        let mut e = Complex64::default();
        let mut r = Complex64::default();
        for (m, j) in (a..=b).enumerate() {
            let d = x - (x_min + j as f64 * dx);
            if m % RESEED == 0 {
                e = Complex64::cis(c * d * d);
                r = Complex64::cis(c * (dx * dx - 2.0 * d * dx));
            }
            let t = src[j] * e;
            out.s0 += t;
            out.s1 += t * d;
            out.s2 += t * (d * d);
            e *= r;
            r *= step;
        }
    }
    out
}

/// Contiguous runs of source points whose density exceeds the node threshold.
fn source_runs(initial: &ComplexField) -> Result<Vec<(usize, usize)>, OpticsError> {
    let rho = initial.density();
    let peak = rho.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(OpticsError::InvalidScene("initial field is identically zero".into()));
    }
    let keep: Vec<bool> = rho.iter().map(|&r| r > DEFAULT_NODE_THRESHOLD * peak).collect();
    let mut runs = Vec::new();
    let mut j = 0;
    while j < keep.len() {
        if keep[j] {
            let a = j;
            while j + 1 < keep.len() && keep[j + 1] {
                j += 1;
            }
            runs.push((a, j));
        }
        j += 1;
    }
    Ok(runs)
}

/// Rejects grids too coarse to resolve the kernel phase at the nearest plane:
/// `dx` must stay below `λ z_min / (4 · span)`, with `span` the extent of the
/// transmitting aperture.
pub fn check_resolution(initial: &ComplexField, scene: &OpticalScene) -> Result<(), OpticsError> {
    scene.validate()?;
    if initial.grid() != &scene.grid {
        return Err(FieldError::InvalidGrid("initial field grid differs from scene grid".into()).into());
    }
    let runs = source_runs(initial)?;
    let grid = scene.grid;
    let dx = grid.dx();
    let span = (grid.x(runs[runs.len() - 1].1) - grid.x(runs[0].0)).max(dx);
    let z_min = scene.z_planes[0];
    let limit = scene.wavelength * z_min / (4.0 * span);
    if dx >= limit {
        return Err(OpticsError::ResolutionViolation { dx, z_min, limit });
    }
    Ok(())
}

/// Paraxial Fresnel-Kirchhoff integral
/// `Ψ(x, z) = e^{ikz} √(k/2πiz) ∫ Ψ(x', 0) e^{ik(x−x')²/2z} dx'`
/// by direct quadrature over the above-threshold source points, for every
/// grid point and plane of `scene`. `∂xΨ` and `∂zΨ` come from differentiating
/// the kernel under the integral.
pub fn fresnel_propagate(initial: &ComplexField, scene: &OpticalScene) -> Result<OpticalField2D, OpticsError> {
    check_resolution(initial, scene)?;
    let runs = source_runs(initial)?;
    let grid = scene.grid;
    let dx = grid.dx();
    let src = initial.values();

    let k = scene.wavenumber();
    let n = grid.n_points();
    let x_min = grid.x_min();
    let i = Complex64::i();
    let planes = scene.z_planes.len();
    let points: Vec<(Complex64, Complex64, Complex64)> = (0..planes * n)
        .into_par_iter()
        .map(|idx| {
            let (p, m) = (idx / n, idx % n);
            let z = scene.z_planes[p];
            let s = kernel_sums(grid.x(m), k / (2.0 * z), &runs, src, x_min, dx);
            let pref = (k / (2.0 * PI * z)).sqrt() * Complex64::cis(-PI / 4.0) * dx;
            let u = pref * s.s0;
            let ux = pref * i * (k / z) * s.s1;
            let uz = pref * (-s.s0 / (2.0 * z) - i * k * s.s2 / (2.0 * z * z));
            let carrier = Complex64::cis(k * z);
            (carrier * u, carrier * ux, carrier * (i * k * u + uz))
        })
        .collect();

    let mut psi = Vec::with_capacity(planes);
    let mut dpsi_dx = Vec::with_capacity(planes);
    let mut dpsi_dz = Vec::with_capacity(planes);
    for row in points.chunks(n) {
        psi.push(row.iter().map(|t| t.0).collect());
        dpsi_dx.push(row.iter().map(|t| t.1).collect());
        dpsi_dz.push(row.iter().map(|t| t.2).collect());
    }
    Ok(OpticalField2D { scene: scene.clone(), psi, dpsi_dx, dpsi_dz })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::optics::{initial_two_slit_field, SlitSpec};

    const LAMBDA: f64 = 943e-9;

    fn scene(slits: Vec<SlitSpec>, planes: Vec<f64>) -> OpticalScene {
        OpticalScene::new(slits, LAMBDA, GridSpec::symmetric(6e-3, 1024).unwrap(), planes).unwrap()
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        let sc = scene(vec![SlitSpec::gaussian(0.3e-3, 0.0)], vec![0.5]);
        let f0 = initial_two_slit_field(&sc).unwrap();
        let g = sc.grid;
        let c = sc.wavenumber() / (2.0 * 0.5);
        let runs = [(0, g.n_points() - 1)];
        let x = 1.3e-3;
        let s = kernel_sums(x, c, &runs, f0.values(), g.x_min(), g.dx());
        let direct: Complex64 =
            (0..g.n_points()).map(|j| f0.values()[j] * Complex64::cis(c * (x - g.x(j)).powi(2))).sum();
        assert!((s.s0 - direct).norm() < 1e-9 * direct.norm().max(1.0));
    }

    #[test]
    fn gaussian_slit_matches_beam() {
        let sc = scene(vec![SlitSpec::gaussian(0.3e-3, 0.5e-3)], vec![0.5, 2.0]);
        let f = fresnel_propagate(&initial_two_slit_field(&sc).unwrap(), &sc).unwrap();
        for (p, &z) in sc.z_planes.iter().enumerate() {
            let exact: Vec<f64> =
                sc.grid.points().iter().map(|&x| gaussian_beam(0.3e-3, 0.5e-3, LAMBDA, x, z).norm_sqr()).collect();
            let peak = exact.iter().cloned().fold(0.0, f64::max);
            let err = f.intensity(p).iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err / peak < 1e-6, "z={z} rel={}", err / peak);
            assert!((f.norm(p) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let sc = scene(vec![SlitSpec::gaussian(0.3e-3, 0.0)], vec![1.0 - 1e-4, 1.0, 1.0 + 1e-4]);
        let f = fresnel_propagate(&initial_two_slit_field(&sc).unwrap(), &sc).unwrap();
        let j = 600;
        let k = sc.wavenumber();
        let env = |p: usize| f.psi[p][j] * Complex64::cis(-k * sc.z_planes[p]);
        let uz_fd = (env(2) - env(0)) / 2e-4;
        let uz = f.dpsi_dz[1][j] * Complex64::cis(-k) - Complex64::i() * k * env(1);
        assert!((uz_fd - uz).norm() < 1e-4 * uz.norm());
        let h = sc.grid.dx();
        let dxv = (f.psi[1][j + 1] - f.psi[1][j - 1]) / (2.0 * h);
        assert!((dxv - f.dpsi_dx[1][j]).norm() < 1e-3 * f.dpsi_dx[1][j].norm());
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let slits = vec![SlitSpec::gaussian(0.3e-3, 2.35e-3), SlitSpec::gaussian(0.3e-3, -2.35e-3)];
        let sc = OpticalScene::new(slits, LAMBDA, GridSpec::symmetric(12e-3, 1024).unwrap(), vec![0.5]).unwrap();
        let f0 = initial_two_slit_field(&sc).unwrap();
        assert!(matches!(fresnel_propagate(&f0, &sc), Err(OpticsError::ResolutionViolation { .. })));
    }
}
