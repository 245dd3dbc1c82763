//! Scalar diffraction behind Gaussian slits, the associated E-polarized
//! electromagnetic fields, and energy streamlines (photon paths).
//!
//! Lengths are SI metres. The scalar field `Ψ(x, z)` is the E_y amplitude; its
//! harmonic time factor is never sampled.

mod em;
mod fresnel;
mod fringes;
mod paths;

pub use em::{
    assemble_em_fields, energy_density, poynting, transverse_momentum, write_profile, EmFields, KxProfile,
    PoyntingField,
};
pub use fresnel::{check_resolution, fresnel_propagate, gaussian_beam, OpticalField2D};
pub use fringes::{cross_term_spacing, extrema, fringe_spacing_from_minima, peak_to_peak};
pub use paths::{
    central_fringe_window, check_path_ordering, launch_positions, path_fraction_in, photon_path, trace_paths,
    write_paths, PathOrderingReport, PhotonPath,
};

use num_complex::Complex64;

use crate::error::OpticsError;
use crate::fields::ComplexField;
use crate::grid::{trapezoid, GridSpec};

/// Vacuum permeability (H/m).
pub const MU0: f64 = 1.25663706212e-6;
/// Speed of light (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 1.0 / (MU0 * C_LIGHT * C_LIGHT);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitSpec {
    pub sigma: f64,
    pub center: f64,
    /// Half width of the hard aperture window; `None` leaves the Gaussian untruncated.
    pub window_halfwidth: Option<f64>,
}

impl SlitSpec {
    pub fn gaussian(sigma: f64, center: f64) -> Self {
        Self { sigma, center, window_halfwidth: None }
    }

    pub fn truncated(sigma: f64, center: f64, halfwidth: f64) -> Self {
        Self { sigma, center, window_halfwidth: Some(halfwidth) }
    }

    fn validate(&self) -> Result<(), OpticsError> {
        if !(self.sigma > 0.0 && self.sigma.is_finite() && self.center.is_finite()) {
            return Err(OpticsError::InvalidScene(format!("slit sigma must be > 0, got {}", self.sigma)));
        }
        if let Some(w) = self.window_halfwidth {
            if !(w > 0.0 && w.is_finite()) {
                return Err(OpticsError::InvalidScene(format!("window half width must be > 0, got {w}")));
            }
        }
        Ok(())
    }

    /// Amplitude `(2πσ²)^{-1/4} e^{−(x−x0)²/4σ²}` times the window.
    pub fn amplitude(&self, x: f64) -> f64 {
        let d = x - self.center;
        if let Some(w) = self.window_halfwidth {
            if d.abs() > w {
                return 0.0;
            }
        }
        (2.0 * std::f64::consts::PI * self.sigma * self.sigma).powf(-0.25) * (-d * d / (4.0 * self.sigma * self.sigma)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// `E = Ψ e_y`.
    EPolarized,
    /// `H = Ψ e_y`; declared for completeness, not implemented.
    HPolarized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalScene {
    pub slits: Vec<SlitSpec>,
    pub wavelength: f64,
    pub grid: GridSpec,
    pub z_planes: Vec<f64>,
    pub polarization: Polarization,
}

impl OpticalScene {
    pub fn new(slits: Vec<SlitSpec>, wavelength: f64, grid: GridSpec, z_planes: Vec<f64>) -> Result<Self, OpticsError> {
        let s = Self { slits, wavelength, grid, z_planes, polarization: Polarization::EPolarized };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), OpticsError> {
        if self.slits.is_empty() {
            return Err(OpticsError::EmptyScene);
        }
        for s in &self.slits {
            s.validate()?;
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(OpticsError::InvalidScene(format!("wavelength must be > 0, got {}", self.wavelength)));
        }
        if self.z_planes.is_empty() {
            return Err(OpticsError::InvalidScene("no propagation planes".into()));
        }
        if self.z_planes.iter().any(|z| !(z.is_finite() && *z > 0.0)) {
            return Err(OpticsError::InvalidScene("propagation planes must be > 0".into()));
        }
        if self.z_planes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(OpticsError::InvalidScene("propagation planes must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn angular_frequency(&self) -> f64 {
        C_LIGHT * self.wavenumber()
    }

    /// Index of the plane at `z`, if `z` is one of the planes (relative 1e-12).
    pub fn plane_index(&self, z: f64) -> Option<usize> {
        self.z_planes.iter().position(|&p| (p - z).abs() <= 1e-12 * p.abs().max(1.0))
    }

    /// The same scene with different slits.
    pub fn with_slits(&self, slits: Vec<SlitSpec>) -> Self {
        Self { slits, ..self.clone() }
    }
}

/// Coherent sum of the slit amplitudes at `z = 0⁺`, renormalized to unit norm.
pub fn initial_two_slit_field(scene: &OpticalScene) -> Result<ComplexField, OpticsError> {
    if scene.slits.is_empty() {
        return Err(OpticsError::EmptyScene);
    }
    let grid = scene.grid;
    let raw: Vec<f64> = grid.points().iter().map(|&x| scene.slits.iter().map(|s| s.amplitude(x)).sum()).collect();
    let norm = trapezoid(&raw.iter().map(|a| a * a).collect::<Vec<_>>(), grid.dx());
    if !(norm > 0.0) {
        return Err(OpticsError::InvalidScene("aperture transmits nothing on this grid".into()));
    }
    let scale = norm.sqrt().recip();
    Ok(ComplexField::new(grid, raw.iter().map(|a| Complex64::new(a * scale, 0.0)).collect(), 0.0)?)
}
